#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ramankit/pipeline.hpp"

namespace {

using namespace ramankit;

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::vector<std::string>& method_names) {
    cmd->set_config("--config", "", "Key-value config file; command-line flags win");
    cmd->add_option("--input-a", cfg.input_a, "Spectra CSV of the first sample (label 1)")
        ->required();
    cmd->add_option("--input-b", cfg.input_b, "Spectra CSV of the second sample (label 0)")
        ->required();
    cmd->add_option("--name-a", cfg.name_a, "Display name of the first sample");
    cmd->add_option("--name-b", cfg.name_b, "Display name of the second sample");
    cmd->add_option("--region", cfg.regions, "Spectral regions to analyse (LW, HW)")
        ->delimiter(',');
    cmd->add_option("--methods", method_names, "Methods: lra,l2d,lrp,pca,cnn")->delimiter(',');
    cmd->add_option("--folds", cfg.folds, "Cross-validation folds");
    cmd->add_option("--seed", cfg.seed, "Master RNG seed; all streams derive from it");
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--outlier-k", cfg.prep.outlier_k,
                    "Decision-surface width in pointwise stds (0 disables)");
    cmd->add_flag("--outlier-pooled", cfg.prep.outlier_pooled,
                  "Fit one surface on the pooled data instead of per sample");
    cmd->add_option("--sg-window", cfg.prep.sg_window,
                    "Savitzky-Golay window, odd number of points (0 disables)");
    cmd->add_option("--sg-order", cfg.prep.sg_order, "Savitzky-Golay polynomial order");
    cmd->add_option_function<std::string>(
           "--sg-edge",
           [&cfg](const std::string& v) {
               if (v == "mirror")
                   cfg.prep.sg_edge = SGEdgeMode::kMirror;
               else if (v == "asymmetric")
                   cfg.prep.sg_edge = SGEdgeMode::kAsymmetric;
               else
                   throw CLI::ValidationError("--sg-edge must be mirror or asymmetric");
           },
           "Edge handling: mirror (default) or asymmetric");
    cmd->add_option("--pool-cuts", cfg.method_opts.pooling.boundaries,
                    "Pooling cut points in cm^-1 (default per region)")
        ->delimiter(',');
    cmd->add_option("--pca-m", cfg.method_opts.pca_components, "Retained PCA components");
    cmd->add_option("--shrinkage", cfg.method_opts.shrinkage, "L2 shrinkage parameter");
    cmd->add_option("--inner-folds", cfg.method_opts.inner_folds,
                    "Nested folds for tau/lambda tuning");
    cmd->add_option("--cnn-epochs", cfg.method_opts.cnn_train.epochs, "CNN training epochs");
    cmd->add_option("--cnn-batch", cfg.method_opts.cnn_train.batch_size, "CNN batch size");
    cmd->add_option("--cnn-lr", cfg.method_opts.cnn_train.learning_rate, "CNN learning rate");
    cmd->add_option("--cnn-patience", cfg.method_opts.cnn_train.patience,
                    "Early-stopping patience (epochs)");
    cmd->add_option("--cnn-val-fraction", cfg.method_opts.cnn_train.val_fraction,
                    "Validation fraction for early stopping (0 disables)");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    cmd->add_flag("--emit-plots", cfg.emit_plots, "Also write a gnuplot script");
}

void parse_methods(const std::vector<std::string>& names, RunConfig& cfg) {
    if (names.empty()) return;
    cfg.methods.clear();
    for (const std::string& n : names) cfg.methods.push_back(method_kind_from_string(n));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Raman spectra classification toolkit"};
    app.require_subcommand(1);

    // synth
    SynthConfig synth_cfg;
    CLI::App* synth = app.add_subcommand("synth", "Generate synthetic class-separable spectra");
    synth->add_option("--preset", synth_cfg.preset_name,
                      "melanoma_like, colon_like or null");
    synth->add_option("--n-per-class", synth_cfg.n_per_class, "Spectra per class");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");
    synth->add_option("--out", synth_cfg.out_dir, "Output directory");

    RunConfig pre_cfg, eval_cfg, explain_cfg;
    std::vector<std::string> pre_methods, eval_methods, explain_methods;

    CLI::App* preprocess =
        app.add_subcommand("preprocess", "Outlier rejection and Savitzky-Golay smoothing");
    add_common_flags(preprocess, pre_cfg, pre_methods);

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Ten-fold cross-validated ROC-AUC for the five methods");
    add_common_flags(evaluate, eval_cfg, eval_methods);

    CLI::App* explain = app.add_subcommand(
        "explain", "Permutation importance (LRP) and gradient saliency maps (CNN)");
    add_common_flags(explain, explain_cfg, explain_methods);
    explain->add_option("--n-permutations", explain_cfg.n_permutations,
                        "Permutations per feature column");
    explain->add_option("--test-fraction", explain_cfg.explain_test_fraction,
                        "Held-out fraction explained");
    explain->add_option_function<std::string>(
        "--ecdf-scope",
        [&explain_cfg](const std::string& v) {
            if (v == "pooled")
                explain_cfg.ecdf_scope = ECDFScope::kPooled;
            else if (v == "per-wavenumber")
                explain_cfg.ecdf_scope = ECDFScope::kPerWavenumber;
            else
                throw CLI::ValidationError("--ecdf-scope must be pooled or per-wavenumber");
        },
        "Saliency ECDF scope: pooled (default) or per-wavenumber");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            const auto [path_a, path_b] = cmd_synth(synth_cfg);
            std::cout << "wrote " << path_a.string() << "\nwrote " << path_b.string() << "\n";
        } else if (preprocess->parsed()) {
            parse_methods(pre_methods, pre_cfg);
            cmd_preprocess(pre_cfg);
            std::cout << "wrote " << (pre_cfg.out_dir / "preprocess_report.json").string()
                      << "\n";
        } else if (evaluate->parsed()) {
            parse_methods(eval_methods, eval_cfg);
            cmd_evaluate(eval_cfg);
            std::cout << "wrote " << (eval_cfg.out_dir / "summary.csv").string() << "\n";
        } else if (explain->parsed()) {
            parse_methods(explain_methods, explain_cfg);
            cmd_explain(explain_cfg);
            std::cout << "wrote explain artifacts to " << explain_cfg.out_dir.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
