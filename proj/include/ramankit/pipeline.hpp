#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ramankit/explain.hpp"
#include "ramankit/eval.hpp"
#include "ramankit/methods.hpp"
#include "ramankit/preprocess.hpp"
#include "ramankit/spectra.hpp"

namespace ramankit {

inline constexpr const char* kVersion = "0.1.0";

struct PreprocessOptions {
    double outlier_k = 3.0;
    bool outlier_pooled = false;  // false = per-sample surfaces (the default)
    int sg_window = 91;
    int sg_order = 3;
    SGEdgeMode sg_edge = SGEdgeMode::kMirror;
};

struct RunConfig {
    std::filesystem::path input_a;  // first sample, label 1
    std::filesystem::path input_b;  // second sample, label 0
    std::string name_a;             // display names; default = file stem
    std::string name_b;
    std::vector<std::string> regions = {"LW", "HW"};
    std::vector<MethodKind> methods = all_method_kinds();
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";
    PreprocessOptions prep;
    MethodOptions method_opts;
    ECDFScope ecdf_scope = ECDFScope::kPooled;
    int n_permutations = 30;
    double explain_test_fraction = 0.2;
    unsigned threads = 0;  // 0 = hardware concurrency
    bool emit_plots = false;
};

struct PreprocessResult {
    SpectraSet merged;  // cleaned, smoothed, full axis
    std::vector<std::size_t> rejected_a;
    std::vector<std::size_t> rejected_b;
};

/// Rejection (per-sample surfaces unless pooled), merge, smoothing — in the
/// order the evaluate command applies them.
PreprocessResult preprocess_pipeline(const SpectraSet& a, const SpectraSet& b,
                                     const PreprocessOptions& opts);

struct SynthConfig {
    std::string preset_name = "colon_like";
    std::size_t n_per_class = 200;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";
};

/// Writes <name_a>.csv and <name_b>.csv in the spectra CSV format; returns
/// the two paths.
std::pair<std::filesystem::path, std::filesystem::path> cmd_synth(const SynthConfig& cfg);

/// Outlier gate + smoothing, written back out as cleaned_a.csv / cleaned_b.csv
/// plus preprocess_report.json with the rejected indices.
void cmd_preprocess(const RunConfig& cfg);

/// Full pipeline: load, preprocess, per region x method ten-fold CV; writes
/// summary.csv, per-method report/ROC files and manifest.json.
void cmd_evaluate(const RunConfig& cfg);

/// Train/test split, LRP permutation importance and CNN saliency on the test
/// part; writes importance_<region>.csv, saliency_<region>.csv, model JSON
/// files and manifest.json.
void cmd_explain(const RunConfig& cfg);

}  // namespace ramankit
