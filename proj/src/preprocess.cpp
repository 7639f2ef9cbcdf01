#include "ramankit/preprocess.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ramankit/matrix.hpp"

namespace ramankit {

namespace {

void check_config(const SGConfig& cfg) {
    if (cfg.window < 1 || cfg.window % 2 == 0)
        throw std::invalid_argument("sg: window must be odd and positive, got " +
                                    std::to_string(cfg.window));
    if (cfg.poly_order < 0 || cfg.poly_order >= cfg.window)
        throw std::invalid_argument("sg: poly_order must satisfy 0 <= order < window");
}

}  // namespace

DecisionSurface fit_surface(const SpectraSet& s, double k) {
    if (s.n_rows() < 2)
        throw std::invalid_argument("fit_surface: need at least 2 spectra, got " +
                                    std::to_string(s.n_rows()));
    DecisionSurface surf;
    surf.mean = column_means(s.matrix());
    surf.stddev = column_stddevs(s.matrix(), surf.mean);
    surf.k = k;
    return surf;
}

RejectionResult reject_outliers(const SpectraSet& s, const DecisionSurface& surf) {
    if (surf.mean.size() != s.n_cols())
        throw std::invalid_argument("reject_outliers: surface dimension " +
                                    std::to_string(surf.mean.size()) + " != spectrum length " +
                                    std::to_string(s.n_cols()));
    std::vector<std::size_t> kept, rejected;
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto r = s.row(i);
        bool outside = false;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double half = surf.k * surf.stddev[j];
            if (r[j] < surf.mean[j] - half || r[j] > surf.mean[j] + half) {
                outside = true;
                break;
            }
        }
        (outside ? rejected : kept).push_back(i);
    }
    return {s.take_rows(kept), std::move(rejected)};
}

std::vector<double> sg_coefficients(const SGConfig& cfg) {
    check_config(cfg);
    return sg_coefficients_at(cfg, cfg.window / 2);
}

std::vector<double> sg_coefficients_at(const SGConfig& cfg, int offset) {
    check_config(cfg);
    if (offset < 0 || offset >= cfg.window)
        throw std::invalid_argument("sg: offset out of window");

    const int w = cfg.window;
    const int m = cfg.poly_order + 1;
    const double half = (w - 1) / 2.0;
    const double scale = half > 0 ? half : 1.0;  // normalize abscissae for conditioning

    // Least-squares polynomial fit on the window; the smoothed value at the
    // evaluation point is a fixed linear combination of the samples:
    //   y_hat = a(t)^T (A^T A)^{-1} A^T y
    Matrix ata(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            double sum = 0.0;
            for (int i = 0; i < w; ++i) sum += std::pow((i - half) / scale, j + k);
            ata.at(j, k) = sum;
        }
    std::vector<double> eval(m);
    const double t = (offset - half) / scale;
    for (int j = 0; j < m; ++j) eval[j] = std::pow(t, j);

    const std::vector<double> g = solve_linear(std::move(ata), std::move(eval));

    std::vector<double> coeff(w);
    for (int i = 0; i < w; ++i) {
        const double z = (i - half) / scale;
        double acc = 0.0;
        double zp = 1.0;
        for (int j = 0; j < m; ++j) {
            acc += g[j] * zp;
            zp *= z;
        }
        coeff[i] = acc;
    }
    return coeff;
}

std::vector<double> smooth_row(std::span<const double> x, const SGConfig& cfg, SGEdgeMode edge) {
    check_config(cfg);
    const int n = static_cast<int>(x.size());
    const int w = cfg.window;
    const int h = w / 2;
    if (n < w)
        throw std::invalid_argument("smooth: spectrum length " + std::to_string(n) +
                                    " shorter than window " + std::to_string(w));

    const std::vector<double> center = sg_coefficients(cfg);
    std::vector<double> out(x.size());

    if (edge == SGEdgeMode::kMirror) {
        auto sample = [&](int idx) {
            if (idx < 0) idx = -idx;
            if (idx >= n) idx = 2 * (n - 1) - idx;
            return x[static_cast<std::size_t>(idx)];
        };
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            if (i >= h && i + h < n) {
                const double* xp = x.data() + (i - h);
                for (int t = 0; t < w; ++t) acc += center[t] * xp[t];
            } else {
                for (int t = 0; t < w; ++t) acc += center[t] * sample(i - h + t);
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
    } else {
        // Edge rows use the first/last full window with the fit evaluated at
        // the actual position inside it.
        std::vector<std::vector<double>> edge_coeff(static_cast<std::size_t>(h));
        for (int off = 0; off < h; ++off) edge_coeff[off] = sg_coefficients_at(cfg, off);

        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            if (i < h) {
                const auto& c = edge_coeff[static_cast<std::size_t>(i)];
                for (int t = 0; t < w; ++t) acc += c[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t)];
            } else if (i + h >= n) {
                // Mirror of the left edge case on the reversed signal.
                const int off = n - 1 - i;
                const auto& c = edge_coeff[static_cast<std::size_t>(off)];
                for (int t = 0; t < w; ++t)
                    acc += c[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(n - 1 - t)];
            } else {
                const double* xp = x.data() + (i - h);
                for (int t = 0; t < w; ++t) acc += center[t] * xp[t];
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
    }
    return out;
}

SpectraSet smooth(const SpectraSet& s, const SGConfig& cfg, SGEdgeMode edge) {
    Matrix m(s.n_rows(), s.n_cols());
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const std::vector<double> sm = smooth_row(s.row(i), cfg, edge);
        std::copy(sm.begin(), sm.end(), m.row(i).begin());
    }
    return SpectraSet::create(s.axis(), std::move(m), s.labels(), s.sample_names());
}

}  // namespace ramankit
