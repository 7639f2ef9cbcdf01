#include "ramankit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ramankit {

std::vector<double> column_means(const Matrix& m) {
    std::vector<double> mu(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) mu[j] += r[j];
    }
    for (double& v : mu) v /= static_cast<double>(m.rows);
    return mu;
}

std::vector<double> column_stddevs(const Matrix& m, const std::vector<double>& means) {
    if (m.rows < 2) throw std::invalid_argument("column_stddevs: need at least 2 rows");
    std::vector<double> ss(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double d = r[j] - means[j];
            ss[j] += d * d;
        }
    }
    const double denom = static_cast<double>(m.rows - 1);
    for (double& v : ss) v = std::sqrt(v / denom);
    return ss;
}

Matrix centered_gram(const Matrix& m, const std::vector<double>& means) {
    const std::size_t p = m.cols;
    Matrix g(p, p);
    std::vector<double> c(p);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < p; ++j) c[j] = r[j] - means[j];
        for (std::size_t j = 0; j < p; ++j) {
            const double cj = c[j];
            double* gr = g.data.data() + j * p;
            for (std::size_t k = j; k < p; ++k) gr[k] += cj * c[k];
        }
    }
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < j; ++k) g.at(j, k) = g.at(k, j);
    return g;
}

namespace {

// Householder reduction to tridiagonal form, then implicit-shift QL.
// Follows the EISPACK tred2/tql2 pair (same lineage as the JAMA port).
void tred2(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = v.rows;
    for (std::size_t j = 0; j < n; ++j) d[j] = v.at(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v.at(i - 1, j);
                v.at(i, j) = 0.0;
                v.at(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v.at(j, i) = f;
                g = e[j] + v.at(j, j) * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += v.at(k, j) * d[k];
                    e[k] += v.at(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k)
                    v.at(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v.at(i - 1, j);
                v.at(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder transformations.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v.at(n - 1, i) = v.at(i, i);
        v.at(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = v.at(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += v.at(k, i + 1) * v.at(k, j);
                for (std::size_t k = 0; k <= i; ++k) v.at(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v.at(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v.at(n - 1, j);
        v.at(n - 1, j) = 0.0;
    }
    v.at(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

void tql2(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = v.rows;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::ldexp(1.0, -52);
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 50)
                    throw std::runtime_error("symmetric_eigen: QL failed to converge");

                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for (std::size_t k = 0; k < n; ++k) {
                        h = v.at(k, i + 1);
                        v.at(k, i + 1) = s * v.at(k, i) + c * h;
                        v.at(k, i) = c * v.at(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& a) {
    if (a.rows != a.cols || a.rows == 0)
        throw std::invalid_argument("symmetric_eigen: matrix must be square and non-empty");
    const std::size_t n = a.rows;

    SymmetricEigen out;
    out.vectors = a;
    out.values.assign(n, 0.0);
    if (n == 1) {
        out.values[0] = a.at(0, 0);
        out.vectors.at(0, 0) = 1.0;
        return out;
    }

    std::vector<double> e(n, 0.0);
    tred2(out.vectors, out.values, e);
    tql2(out.vectors, out.values, e);

    // Reorder to non-increasing eigenvalues.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });

    std::vector<double> sorted_vals(n);
    Matrix sorted_vecs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted_vals[k] = out.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted_vecs.at(i, k) = out.vectors.at(i, order[k]);
    }
    out.values = std::move(sorted_vals);
    out.vectors = std::move(sorted_vecs);
    return out;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows;
    if (a.cols != n || b.size() != n)
        throw std::invalid_argument("solve_linear: dimension mismatch");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a.at(i, col)) > std::abs(a.at(piv, col))) piv = i;
        if (std::abs(a.at(piv, col)) < 1e-300)
            throw std::runtime_error("solve_linear: singular system");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double factor = a.at(i, col) / a.at(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a.at(i, j) -= factor * a.at(col, j);
            b[i] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
        x[i] = s / a.at(i, i);
    }
    return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace ramankit
