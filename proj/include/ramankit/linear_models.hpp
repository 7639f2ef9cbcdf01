#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ramankit/matrix.hpp"
#include "ramankit/spectra.hpp"

namespace ramankit {

// ---------------------------------------------------------------------------
// Penalized logistic regression

struct LogisticModel {
    double beta0 = 0.0;
    std::vector<double> beta;
    double shrinkage = 1.0;

    double linear(std::span<const double> z) const;
    /// P(W = 1 | z), in (0, 1).
    double score(std::span<const double> z) const;
};

struct LogisticFitOptions {
    double grad_tol = 1e-6;
    int max_iters = 10000;
};

struct LogisticFit {
    LogisticModel model;
    bool converged = false;
    double grad_norm = 0.0;
    int iterations = 0;
    double final_loss = 0.0;
};

/// Mean binary cross-entropy plus shrinkage*|beta|^2/(2N); intercept is not
/// penalized.
double logistic_loss(const Matrix& features, const std::vector<int>& labels,
                     const LogisticModel& m);

/// Gradient of logistic_loss; element 0 is d/d beta0.
std::vector<double> logistic_gradient(const Matrix& features, const std::vector<int>& labels,
                                      const LogisticModel& m);

/// Full-batch gradient descent with backtracking line search. The objective
/// is convex, so the returned point is the global optimum whenever
/// `converged` is set. Deterministic for fixed inputs.
LogisticFit fit_logistic(const Matrix& features, const std::vector<int>& labels,
                         double shrinkage = 1.0, const LogisticFitOptions& opts = {});

/// 1 iff score >= lambda; lambda must lie in [0, 1].
int classify_with_threshold(const LogisticModel& m, std::span<const double> z, double lambda);

// ---------------------------------------------------------------------------
// Global-average features (LRA)

/// N x 1 matrix of per-spectrum mean intensities.
Matrix lra_features(const SpectraSet& s);

// ---------------------------------------------------------------------------
// l2-distance classifier (L2D)

struct L2DModel {
    std::vector<double> h1;  // mean spectrum of the label-1 sample
    std::vector<double> h2;  // mean spectrum of the label-0 sample
    double tau = 0.5;
};

/// Columnwise class means; errors if either class is absent.
L2DModel fit_l2d(const SpectraSet& train);

/// Squared l2 distances (d1, d2) of x to the two class means.
std::pair<double, double> l2d_distances(std::span<const double> x, const L2DModel& m);

/// 1 iff tau*d1 <= (1-tau)*d2.
int l2d_classify(std::span<const double> x, const L2DModel& m);

/// Continuous score (1-tau)*d2 - tau*d1; classify(x) == 1 iff score >= 0.
double l2d_score(std::span<const double> x, const L2DModel& m);

// ---------------------------------------------------------------------------
// Average pooling (LRP features)

/// Interior cut points splitting a region's axis into contiguous sub-domains.
/// Cuts at {c1..ck} give bands [lo, c1), [c1, c2), ..., [ck, hi].
struct PoolingSpec {
    std::vector<double> boundaries;
};

/// Default sub-domain cuts: LW -> {230, 330, 480} (4 bands),
/// HW -> {2700, 3200} (3 bands).
PoolingSpec default_pooling(const std::string& region_name);

/// Band index per axis position; throws if any band captures no grid points.
std::vector<std::size_t> pooling_assignment(const WavenumberAxis& axis, const PoolingSpec& spec);

/// Human-readable band labels like "480-549" for reports.
std::vector<std::string> pooling_band_labels(const WavenumberAxis& axis,
                                             const PoolingSpec& spec);

/// N x F matrix of mean intensity per sub-domain.
Matrix pool_features(const SpectraSet& s, const PoolingSpec& spec);

// ---------------------------------------------------------------------------
// Principal component analysis

struct PCABasis {
    std::vector<double> column_means;
    Matrix components;                // p x m, column i = loading vector v_i
    std::vector<double> eigenvalues;  // top m eigenvalues of Y^T Y, non-increasing
    double eigenvalue_sum = 0.0;      // sum over all components (= centered SS)
    std::size_t n_samples = 0;

    std::size_t n_components() const { return eigenvalues.size(); }
};

/// Eigendecomposition of the centered data's covariance structure. Loading
/// signs are fixed so each component's largest-magnitude entry is positive.
/// Requires N > m >= 1 and m <= rank of the centered data.
PCABasis fit_pca(const SpectraSet& s, std::size_t m);

/// Centers rows by the basis means and projects onto the loadings (N x m).
Matrix project(const SpectraSet& s, const PCABasis& basis);

/// lambda_i / sum(all lambda); the "Proportion of Variance" per component.
std::vector<double> variance_proportions(const PCABasis& basis);

}  // namespace ramankit
