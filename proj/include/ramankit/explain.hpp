#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ramankit/cnn.hpp"
#include "ramankit/linear_models.hpp"
#include "ramankit/matrix.hpp"
#include "ramankit/spectra.hpp"

namespace ramankit {

struct ImportanceEntry {
    std::string label;              // sub-band, e.g. "2700-3200"
    double importance = 0.0;        // baseline AUC - mean permuted AUC
    double half_width = 0.0;        // 95% normal-approximation half-width
    double mean_permuted_auc = 0.0;
};

struct ImportanceReport {
    double baseline_auc = 0.0;
    int n_permutations = 30;
    std::vector<ImportanceEntry> features;
};

/// Shuffles one feature column at a time (n_perm seeded draws each) and
/// measures the AUC drop it causes.
ImportanceReport permutation_importance(const LogisticModel& model, const Matrix& features,
                                        const std::vector<int>& labels,
                                        const std::vector<std::string>& feature_labels,
                                        int n_perm, std::uint64_t seed);

enum class ECDFScope {
    kPooled,         // one ECDF over every (spectrum, wavenumber) derivative
    kPerWavenumber,  // separate ECDF per wavenumber column
};

struct SaliencyMap {
    std::vector<double> wavenumbers;
    std::vector<double> mean;        // in [0, 1]
    std::vector<double> half_width;  // 1.96 * std / sqrt(N_test)
};

/// Vanilla-Gradient saliency: input-gradients of the output probability,
/// mapped through the empirical CDF of the score derivatives, then averaged
/// per wavenumber over the test set.
SaliencyMap saliency_map(const CNNModel& model, const SpectraSet& test,
                         ECDFScope scope = ECDFScope::kPooled);

/// Midrank ECDF values (average rank / M); ties share a value.
std::vector<double> ecdf_values(const std::vector<double>& values);

}  // namespace ramankit
