#include "ramankit/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramankit {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus_stable(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace

double LogisticModel::linear(std::span<const double> z) const {
    return beta0 + dot(beta, z);
}

double LogisticModel::score(std::span<const double> z) const { return sigmoid(linear(z)); }

double logistic_loss(const Matrix& features, const std::vector<int>& labels,
                     const LogisticModel& m) {
    const std::size_t n = features.rows;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = m.linear(features.row(i));
        // BCE = y*softplus(-z) + (1-y)*softplus(z)
        loss += labels[i] ? softplus_stable(-z) : softplus_stable(z);
    }
    loss /= static_cast<double>(n);
    double pen = 0.0;
    for (double b : m.beta) pen += b * b;
    return loss + m.shrinkage * pen / (2.0 * static_cast<double>(n));
}

std::vector<double> logistic_gradient(const Matrix& features, const std::vector<int>& labels,
                                      const LogisticModel& m) {
    const std::size_t n = features.rows;
    const std::size_t p = features.cols;
    std::vector<double> g(p + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = features.row(i);
        const double resid = sigmoid(m.linear(row)) - labels[i];
        g[0] += resid;
        for (std::size_t j = 0; j < p; ++j) g[j + 1] += resid * row[j];
    }
    for (double& v : g) v /= static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j)
        g[j + 1] += m.shrinkage * m.beta[j] / static_cast<double>(n);
    return g;
}

LogisticFit fit_logistic(const Matrix& features, const std::vector<int>& labels,
                         double shrinkage, const LogisticFitOptions& opts) {
    const std::size_t n = features.rows;
    if (n < 2) throw std::invalid_argument("fit_logistic: need at least 2 samples");
    if (labels.size() != n) throw std::invalid_argument("fit_logistic: label count mismatch");
    if (shrinkage < 0) throw std::invalid_argument("fit_logistic: shrinkage must be >= 0");
    bool has0 = false, has1 = false;
    for (int y : labels) (y ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::invalid_argument("fit_logistic: both classes must be present");
    for (double v : features.data)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_logistic: non-finite feature");

    LogisticFit fit;
    fit.model.beta0 = 0.0;
    fit.model.beta.assign(features.cols, 0.0);
    fit.model.shrinkage = shrinkage;

    double loss = logistic_loss(features, labels, fit.model);
    double step = 1.0;
    constexpr double kArmijo = 1e-4;

    for (int it = 0; it < opts.max_iters; ++it) {
        const std::vector<double> g = logistic_gradient(features, labels, fit.model);
        double gnorm2 = 0.0;
        for (double v : g) gnorm2 += v * v;
        fit.grad_norm = std::sqrt(gnorm2);
        fit.iterations = it;
        if (fit.grad_norm < opts.grad_tol) {
            fit.converged = true;
            break;
        }

        // Backtracking from an adaptive initial step.
        LogisticModel trial = fit.model;
        double t = step;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            trial.beta0 = fit.model.beta0 - t * g[0];
            for (std::size_t j = 0; j < trial.beta.size(); ++j)
                trial.beta[j] = fit.model.beta[j] - t * g[j + 1];
            const double trial_loss = logistic_loss(features, labels, trial);
            if (trial_loss <= loss - kArmijo * t * gnorm2) {
                fit.model = trial;
                loss = trial_loss;
                step = t * 2.0;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // step underflow; gradient norm reported as-is
    }
    if (!fit.converged) {
        const std::vector<double> g = logistic_gradient(features, labels, fit.model);
        double gnorm2 = 0.0;
        for (double v : g) gnorm2 += v * v;
        fit.grad_norm = std::sqrt(gnorm2);
    }
    fit.final_loss = loss;
    return fit;
}

int classify_with_threshold(const LogisticModel& m, std::span<const double> z, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("classify_with_threshold: lambda must be in [0, 1]");
    return m.score(z) >= lambda ? 1 : 0;
}

Matrix lra_features(const SpectraSet& s) {
    Matrix f(s.n_rows(), 1);
    const double p = static_cast<double>(s.n_cols());
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        double sum = 0.0;
        for (double v : s.row(i)) sum += v;
        f.at(i, 0) = sum / p;
    }
    return f;
}

L2DModel fit_l2d(const SpectraSet& train) {
    const auto idx1 = train.indices_with_label(1);
    const auto idx0 = train.indices_with_label(0);
    if (idx1.empty() || idx0.empty())
        throw std::invalid_argument("fit_l2d: both classes must be present");

    L2DModel m;
    m.h1.assign(train.n_cols(), 0.0);
    m.h2.assign(train.n_cols(), 0.0);
    for (std::size_t i : idx1) {
        const auto r = train.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) m.h1[j] += r[j];
    }
    for (std::size_t i : idx0) {
        const auto r = train.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) m.h2[j] += r[j];
    }
    for (double& v : m.h1) v /= static_cast<double>(idx1.size());
    for (double& v : m.h2) v /= static_cast<double>(idx0.size());
    return m;
}

std::pair<double, double> l2d_distances(std::span<const double> x, const L2DModel& m) {
    if (x.size() != m.h1.size())
        throw std::invalid_argument("l2d: spectrum length does not match model");
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double a = x[j] - m.h1[j];
        const double b = x[j] - m.h2[j];
        d1 += a * a;
        d2 += b * b;
    }
    return {d1, d2};
}

int l2d_classify(std::span<const double> x, const L2DModel& m) {
    const auto [d1, d2] = l2d_distances(x, m);
    return m.tau * d1 <= (1.0 - m.tau) * d2 ? 1 : 0;
}

double l2d_score(std::span<const double> x, const L2DModel& m) {
    const auto [d1, d2] = l2d_distances(x, m);
    return (1.0 - m.tau) * d2 - m.tau * d1;
}

PoolingSpec default_pooling(const std::string& region_name) {
    if (region_name == "LW") return {{230.0, 330.0, 480.0}};
    if (region_name == "HW") return {{2700.0, 3200.0}};
    throw std::invalid_argument("default_pooling: unknown region '" + region_name + "'");
}

std::vector<std::size_t> pooling_assignment(const WavenumberAxis& axis,
                                            const PoolingSpec& spec) {
    for (std::size_t c = 0; c + 1 < spec.boundaries.size(); ++c)
        if (!(spec.boundaries[c] < spec.boundaries[c + 1]))
            throw std::invalid_argument("pooling: cut points must be strictly increasing");

    const std::size_t n_bands = spec.boundaries.size() + 1;
    std::vector<std::size_t> assign(axis.size());
    std::vector<std::size_t> counts(n_bands, 0);
    for (std::size_t j = 0; j < axis.size(); ++j) {
        const double w = axis.values[j];
        std::size_t band = 0;
        while (band < spec.boundaries.size() && w >= spec.boundaries[band]) ++band;
        assign[j] = band;
        ++counts[band];
    }
    for (std::size_t b = 0; b < n_bands; ++b)
        if (counts[b] == 0)
            throw std::invalid_argument("pooling: sub-domain " + std::to_string(b) +
                                        " captures no grid points");
    return assign;
}

std::vector<std::string> pooling_band_labels(const WavenumberAxis& axis,
                                             const PoolingSpec& spec) {
    const auto assign = pooling_assignment(axis, spec);
    const std::size_t n_bands = spec.boundaries.size() + 1;
    std::vector<double> lo(n_bands, 0.0), hi(n_bands, 0.0);
    std::vector<bool> seen(n_bands, false);
    for (std::size_t j = 0; j < axis.size(); ++j) {
        const std::size_t b = assign[j];
        const double w = axis.values[j];
        if (!seen[b]) {
            lo[b] = hi[b] = w;
            seen[b] = true;
        } else {
            lo[b] = std::min(lo[b], w);
            hi[b] = std::max(hi[b], w);
        }
    }
    std::vector<std::string> labels(n_bands);
    for (std::size_t b = 0; b < n_bands; ++b) {
        labels[b] = std::to_string(static_cast<long long>(std::llround(lo[b]))) + "-" +
                    std::to_string(static_cast<long long>(std::llround(hi[b])));
    }
    return labels;
}

Matrix pool_features(const SpectraSet& s, const PoolingSpec& spec) {
    const auto assign = pooling_assignment(s.axis(), spec);
    const std::size_t n_bands = spec.boundaries.size() + 1;
    std::vector<double> counts(n_bands, 0.0);
    for (std::size_t b : assign) counts[b] += 1.0;

    Matrix f(s.n_rows(), n_bands);
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto r = s.row(i);
        auto out = f.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) out[assign[j]] += r[j];
        for (std::size_t b = 0; b < n_bands; ++b) out[b] /= counts[b];
    }
    return f;
}

namespace {

void fix_loading_sign(Matrix& components, std::size_t col) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < components.rows; ++i) {
        const double a = std::abs(components.at(i, col));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (components.at(arg, col) < 0)
        for (std::size_t i = 0; i < components.rows; ++i) components.at(i, col) = -components.at(i, col);
}

}  // namespace

PCABasis fit_pca(const SpectraSet& s, std::size_t m) {
    const std::size_t n = s.n_rows();
    const std::size_t p = s.n_cols();
    if (m < 1) throw std::invalid_argument("fit_pca: m must be >= 1");
    if (n <= m)
        throw std::invalid_argument("fit_pca: need more samples than components (N=" +
                                    std::to_string(n) + ", m=" + std::to_string(m) + ")");

    PCABasis basis;
    basis.column_means = column_means(s.matrix());
    basis.n_samples = n;

    std::vector<double> all_values;
    Matrix loadings;  // p x (#computed components)

    if (p <= n) {
        const Matrix gram = centered_gram(s.matrix(), basis.column_means);
        SymmetricEigen eig = symmetric_eigen(gram);
        all_values = std::move(eig.values);
        loadings = std::move(eig.vectors);
    } else {
        // Dual route for wide data: eigenvectors u of the N x N sample Gram
        // matrix give loadings v = Y^T u / sqrt(lambda) with the same
        // nonzero eigenvalues.
        Matrix sg(n, n);
        std::vector<double> c(p);
        Matrix centered(n, p);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = s.row(i);
            auto out = centered.row(i);
            for (std::size_t j = 0; j < p; ++j) out[j] = r[j] - basis.column_means[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = i; k < n; ++k) {
                const double v = dot(centered.row(i), centered.row(k));
                sg.at(i, k) = v;
                sg.at(k, i) = v;
            }
        }
        SymmetricEigen eig = symmetric_eigen(sg);
        all_values = std::move(eig.values);
        loadings = Matrix(p, n);
        for (std::size_t k = 0; k < n; ++k) {
            if (all_values[k] <= 0) continue;
            std::vector<double> v(p, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = eig.vectors.at(i, k);
                if (u == 0.0) continue;
                const auto r = centered.row(i);
                for (std::size_t j = 0; j < p; ++j) v[j] += u * r[j];
            }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 0)
                for (std::size_t j = 0; j < p; ++j) loadings.at(j, k) = v[j] / norm;
        }
    }

    // Clamp numerically-zero eigenvalues so rank and variance proportions are
    // exact on degenerate data.
    const double lead = all_values.empty() ? 0.0 : std::max(all_values.front(), 0.0);
    const double floor = 1e-12 * lead;
    std::size_t rank = 0;
    double sum = 0.0;
    for (double& v : all_values) {
        if (v <= floor) v = 0.0;
        if (v > 0.0) ++rank;
        sum += v;
    }
    if (m > rank)
        throw std::invalid_argument("fit_pca: requested " + std::to_string(m) +
                                    " components but centered data has rank " +
                                    std::to_string(rank));

    basis.eigenvalues.assign(all_values.begin(), all_values.begin() + static_cast<std::ptrdiff_t>(m));
    basis.eigenvalue_sum = sum;
    basis.components = Matrix(p, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < p; ++j) basis.components.at(j, k) = loadings.at(j, k);
    for (std::size_t k = 0; k < m; ++k) fix_loading_sign(basis.components, k);
    return basis;
}

Matrix project(const SpectraSet& s, const PCABasis& basis) {
    const std::size_t p = s.n_cols();
    if (p != basis.column_means.size())
        throw std::invalid_argument("project: spectrum length does not match basis");
    const std::size_t m = basis.n_components();
    Matrix z(s.n_rows(), m);
    std::vector<double> c(p);
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto r = s.row(i);
        for (std::size_t j = 0; j < p; ++j) c[j] = r[j] - basis.column_means[j];
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += c[j] * basis.components.at(j, k);
            z.at(i, k) = acc;
        }
    }
    return z;
}

std::vector<double> variance_proportions(const PCABasis& basis) {
    std::vector<double> props(basis.n_components(), 0.0);
    if (basis.eigenvalue_sum > 0)
        for (std::size_t k = 0; k < props.size(); ++k)
            props[k] = basis.eigenvalues[k] / basis.eigenvalue_sum;
    return props;
}

}  // namespace ramankit
