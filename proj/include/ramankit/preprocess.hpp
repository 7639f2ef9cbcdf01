#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ramankit/spectra.hpp"

namespace ramankit {

/// Pointwise mean +/- k*std band used to reject outlier spectra.
struct DecisionSurface {
    std::vector<double> mean;
    std::vector<double> stddev;  // sample convention (ddof = 1)
    double k = 3.0;
};

struct SGConfig {
    int window = 91;     // odd
    int poly_order = 3;  // < window
};

enum class SGEdgeMode {
    kMirror,      // reflect about the edge sample (x[-i] = x[i])
    kAsymmetric,  // truncated least-squares fits near the edges
};

/// Columnwise mean/std over all rows of s. Requires N >= 2.
DecisionSurface fit_surface(const SpectraSet& s, double k = 3.0);

struct RejectionResult {
    SpectraSet kept;
    std::vector<std::size_t> rejected_indices;
};

/// Drops every row with at least one point strictly outside the band.
/// Points exactly on the band boundary count as inside.
RejectionResult reject_outliers(const SpectraSet& s, const DecisionSurface& surf);

/// Centered least-squares smoothing weights; they sum to 1.
std::vector<double> sg_coefficients(const SGConfig& cfg);

/// Smoothing weights for an asymmetric window evaluated at `offset` points
/// from the window start (0 <= offset < window). offset == window/2
/// reproduces sg_coefficients.
std::vector<double> sg_coefficients_at(const SGConfig& cfg, int offset);

/// Applies the filter to every row; output length equals input length.
SpectraSet smooth(const SpectraSet& s, const SGConfig& cfg,
                  SGEdgeMode edge = SGEdgeMode::kMirror);

/// Single-row variant used by smooth() and by tests.
std::vector<double> smooth_row(std::span<const double> x, const SGConfig& cfg,
                               SGEdgeMode edge = SGEdgeMode::kMirror);

}  // namespace ramankit
