#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ramankit/rng.hpp"
#include "ramankit/spectra.hpp"

namespace ramankit {

// ---------------------------------------------------------------------------
// Fold plans

struct FoldPlan {
    std::size_t k = 10;
    std::vector<std::size_t> assignments;  // fold index per row
    std::uint64_t seed = 0;
};

/// Seeded shuffle then round-robin assignment, stratified by label so class
/// counts per fold differ by at most one. Requires labels.size() >= k >= 2.
FoldPlan make_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// ROC / AUC

struct RocCurve {
    double auc = 0.0;                                 // Mann-Whitney statistic
    std::vector<std::pair<double, double>> points;    // (FPR, TPR), (0,0) .. (1,1)
};

/// AUC as the tie-adjusted Mann-Whitney pair statistic plus the threshold-
/// swept ROC polyline. Both classes must be present.
RocCurve roc_auc(std::span<const double> scores, const std::vector<int>& labels);

/// Area under an ROC polyline by the trapezoidal rule. Kept as a second,
/// independent route to the same number as roc_auc().auc.
double trapezoid_area(const std::vector<std::pair<double, double>>& points);

// ---------------------------------------------------------------------------
// Methods

/// A fitted classifier reduced to its ranking score.
class ScoreModel {
public:
    virtual ~ScoreModel() = default;
    virtual double score(std::span<const double> x) const = 0;
};

/// Diagnostics a method may emit while fitting (solver warnings, tuned
/// parameters); collected into the run report.
struct MethodNotes {
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> tuned;
};

struct Method {
    std::string name;
    std::function<std::unique_ptr<ScoreModel>(const SpectraSet& train, Rng rng,
                                              MethodNotes* notes)> fit;
};

// ---------------------------------------------------------------------------
// Cross-validation

struct EvalReport {
    std::string method;
    std::string region;
    std::string comparison;  // "<first> vs. <second>"
    std::vector<double> per_fold_auc;
    double mean_auc = 0.0;
    double sem = 0.0;  // sample std over folds / sqrt(k)
    std::vector<std::vector<std::pair<double, double>>> roc_points;  // per fold
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> tuned;  // tagged "fold<i>:<name>"
};

struct CrossValidateOptions {
    std::uint64_t seed = 0;   // master seed; per-fold streams split from it
    unsigned threads = 0;     // 0 = hardware concurrency
};

/// Fits on nine folds, scores the held-out one, for every fold. Inner tuning
/// happens inside method.fit and therefore sees training rows only. Results
/// are bitwise independent of the thread count.
EvalReport cross_validate(const Method& method, const SpectraSet& data, const FoldPlan& plan,
                          const CrossValidateOptions& opts = {});

// ---------------------------------------------------------------------------
// Summary table

struct SummaryTable {
    std::vector<std::string> columns;                 // method names
    std::vector<std::string> row_labels;              // "comparison region"
    std::vector<std::vector<std::string>> cells;      // formatted mean AUC or ""
};

/// Rows = comparison x region in first-seen order, columns = the five
/// methods, cells = mean AUC rounded to two decimals.
SummaryTable summary_table(const std::vector<EvalReport>& reports);

std::string summary_to_csv(const SummaryTable& t);
std::string summary_to_text(const SummaryTable& t);

}  // namespace ramankit
