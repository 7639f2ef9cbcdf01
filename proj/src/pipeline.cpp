#include "ramankit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ramankit/serialize.hpp"
#include "ramankit/synth.hpp"

namespace ramankit {

using nlohmann::json;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json config_json(const RunConfig& cfg) {
    json methods = json::array();
    for (MethodKind m : cfg.methods) methods.push_back(method_kind_name(m));
    json j;
    j["input_a"] = cfg.input_a.string();
    j["input_b"] = cfg.input_b.string();
    j["name_a"] = cfg.name_a;
    j["name_b"] = cfg.name_b;
    j["regions"] = cfg.regions;
    j["methods"] = methods;
    j["folds"] = cfg.folds;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir.string();
    j["outlier_k"] = cfg.prep.outlier_k;
    j["outlier_pooled"] = cfg.prep.outlier_pooled;
    j["sg_window"] = cfg.prep.sg_window;
    j["sg_order"] = cfg.prep.sg_order;
    j["sg_edge"] = cfg.prep.sg_edge == SGEdgeMode::kMirror ? "mirror" : "asymmetric";
    j["pool_cuts"] = cfg.method_opts.pooling.boundaries;
    j["pca_components"] = cfg.method_opts.pca_components;
    j["shrinkage"] = cfg.method_opts.shrinkage;
    j["inner_folds"] = cfg.method_opts.inner_folds;
    j["cnn_epochs"] = cfg.method_opts.cnn_train.epochs;
    j["cnn_batch_size"] = cfg.method_opts.cnn_train.batch_size;
    j["cnn_learning_rate"] = cfg.method_opts.cnn_train.learning_rate;
    j["cnn_val_fraction"] = cfg.method_opts.cnn_train.val_fraction;
    j["cnn_patience"] = cfg.method_opts.cnn_train.patience;
    j["ecdf_scope"] = cfg.ecdf_scope == ECDFScope::kPooled ? "pooled" : "per_wavenumber";
    j["n_permutations"] = cfg.n_permutations;
    j["explain_test_fraction"] = cfg.explain_test_fraction;
    j["threads"] = cfg.threads;
    return j;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& artifacts, const json& extra) {
    json j;
    j["tool"] = "ramankit";
    j["version"] = kVersion;
    j["command"] = command;
    j["timestamp"] = iso_timestamp();
    j["config"] = config_json(cfg);
    j["artifacts"] = artifacts;
    j["rng"] = "mt19937-64; streams split from --seed via splitmix64";
    if (!extra.is_null()) j["run"] = extra;
    write_text_file(cfg.out_dir / "manifest.json", j.dump(2));
}

std::pair<SpectraSet, SpectraSet> load_inputs(const RunConfig& cfg) {
    if (cfg.input_a.empty() || cfg.input_b.empty())
        throw std::invalid_argument("both --input-a and --input-b are required");
    SpectraSet a = load_spectra(cfg.input_a, 1, cfg.name_a);
    SpectraSet b = load_spectra(cfg.input_b, 0, cfg.name_b);
    return {std::move(a), std::move(b)};
}

MethodOptions method_options_for(const RunConfig& cfg, std::uint64_t stream) {
    MethodOptions opts = cfg.method_opts;
    opts.cnn_train.seed = mix_seed(cfg.seed, stream);
    return opts;
}

std::string lower_name(MethodKind kind) {
    std::string s = method_kind_name(kind);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void emit_gnuplot(const RunConfig& cfg, const std::vector<EvalReport>& reports) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set size square\nset xlabel 'FPR'\nset ylabel 'TPR'\nset key bottom right\n";
    for (const auto& r : reports) {
        std::string method = r.method;
        std::transform(method.begin(), method.end(), method.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const std::string stem = "roc_" + method + "_" + r.region;
        gp << "set output '" << stem << ".png'\nset term png\n"
           << "plot '" << stem << ".csv' every ::1 using 2:3 with lines title '" << r.method
           << ' ' << r.region << "', x dashtype 2 notitle\n";
    }
    write_text_file(cfg.out_dir / "plots.gp", gp.str());
}

}  // namespace

PreprocessResult preprocess_pipeline(const SpectraSet& a, const SpectraSet& b,
                                     const PreprocessOptions& opts) {
    PreprocessResult result;
    SpectraSet cleaned_a = a;
    SpectraSet cleaned_b = b;

    if (opts.outlier_k > 0) {
        if (opts.outlier_pooled) {
            const SpectraSet pooled = merge(a, b);
            const DecisionSurface surf = fit_surface(pooled, opts.outlier_k);
            RejectionResult ra = reject_outliers(a, surf);
            RejectionResult rb = reject_outliers(b, surf);
            cleaned_a = std::move(ra.kept);
            cleaned_b = std::move(rb.kept);
            result.rejected_a = std::move(ra.rejected_indices);
            result.rejected_b = std::move(rb.rejected_indices);
        } else {
            RejectionResult ra = reject_outliers(a, fit_surface(a, opts.outlier_k));
            RejectionResult rb = reject_outliers(b, fit_surface(b, opts.outlier_k));
            cleaned_a = std::move(ra.kept);
            cleaned_b = std::move(rb.kept);
            result.rejected_a = std::move(ra.rejected_indices);
            result.rejected_b = std::move(rb.rejected_indices);
        }
    }

    SpectraSet merged = merge(cleaned_a, cleaned_b);
    if (opts.sg_window > 0) {
        const SGConfig sg{opts.sg_window, opts.sg_order};
        merged = smooth(merged, sg, opts.sg_edge);
    }
    result.merged = std::move(merged);
    return result;
}

std::pair<std::filesystem::path, std::filesystem::path> cmd_synth(const SynthConfig& cfg) {
    const SynthPreset p = preset(cfg.preset_name);
    const WavenumberAxis axis = reference_axis();
    const SpectraSet all =
        generate(p.first, p.second, cfg.n_per_class, axis, cfg.seed, p.sample_names);

    std::filesystem::create_directories(cfg.out_dir);
    const SpectraSet first = all.take_rows(all.indices_with_label(1));
    const SpectraSet second = all.take_rows(all.indices_with_label(0));
    const auto path_a = cfg.out_dir / (p.sample_names[0] + ".csv");
    const auto path_b = cfg.out_dir / (p.sample_names[1] + ".csv");
    save_spectra(first, path_a);
    save_spectra(second, path_b);
    return {path_a, path_b};
}

void cmd_preprocess(const RunConfig& cfg) {
    auto [a, b] = load_inputs(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const PreprocessResult pre = preprocess_pipeline(a, b, cfg.prep);

    const SpectraSet out_a = pre.merged.take_rows(pre.merged.indices_with_label(1));
    const SpectraSet out_b = pre.merged.take_rows(pre.merged.indices_with_label(0));
    save_spectra(out_a, cfg.out_dir / "cleaned_a.csv");
    save_spectra(out_b, cfg.out_dir / "cleaned_b.csv");

    json report;
    report["rejected_indices_a"] = pre.rejected_a;
    report["rejected_indices_b"] = pre.rejected_b;
    report["rejected_count"] = pre.rejected_a.size() + pre.rejected_b.size();
    report["kept_a"] = out_a.n_rows();
    report["kept_b"] = out_b.n_rows();
    write_text_file(cfg.out_dir / "preprocess_report.json", report.dump(2));

    write_manifest(cfg, "preprocess",
                   {"cleaned_a.csv", "cleaned_b.csv", "preprocess_report.json"}, report);
}

void cmd_evaluate(const RunConfig& cfg) {
    if (cfg.methods.empty()) throw std::invalid_argument("evaluate: no methods requested");
    auto [a, b] = load_inputs(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const PreprocessResult pre = preprocess_pipeline(a, b, cfg.prep);

    std::vector<EvalReport> reports;
    std::vector<std::string> artifacts;
    for (std::size_t ri = 0; ri < cfg.regions.size(); ++ri) {
        const RegionSpec region = region_by_name(cfg.regions[ri]);
        const SpectraSet data = extract_region(pre.merged, region);
        const FoldPlan plan = make_folds(data.labels(), cfg.folds, mix_seed(cfg.seed, ri));

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            const MethodKind kind = cfg.methods[mi];
            const Method method =
                make_method(kind, method_options_for(cfg, ri * 16 + mi), region.name);
            CrossValidateOptions cv;
            cv.seed = mix_seed(cfg.seed, 1000 + ri * 16 + mi);
            cv.threads = cfg.threads;
            EvalReport report = cross_validate(method, data, plan, cv);
            report.region = region.name;

            const std::string stem = lower_name(kind) + "_" + region.name;
            write_text_file(cfg.out_dir / ("report_" + stem + ".json"),
                            eval_report_to_json(report));
            write_text_file(cfg.out_dir / ("roc_" + stem + ".csv"), roc_to_csv(report));
            artifacts.push_back("report_" + stem + ".json");
            artifacts.push_back("roc_" + stem + ".csv");
            reports.push_back(std::move(report));
        }
    }

    const SummaryTable table = summary_table(reports);
    write_text_file(cfg.out_dir / "summary.csv", summary_to_csv(table));
    write_text_file(cfg.out_dir / "summary.txt", summary_to_text(table));
    artifacts.push_back("summary.csv");
    artifacts.push_back("summary.txt");
    if (cfg.emit_plots) {
        emit_gnuplot(cfg, reports);
        artifacts.push_back("plots.gp");
    }

    json extra;
    extra["rejected_a"] = pre.rejected_a;
    extra["rejected_b"] = pre.rejected_b;
    write_manifest(cfg, "evaluate", artifacts, extra);
}

void cmd_explain(const RunConfig& cfg) {
    const bool want_lrp =
        std::find(cfg.methods.begin(), cfg.methods.end(), MethodKind::kLRP) != cfg.methods.end();
    const bool want_cnn =
        std::find(cfg.methods.begin(), cfg.methods.end(), MethodKind::kCNN) != cfg.methods.end();
    if (!want_lrp && !want_cnn)
        throw std::invalid_argument("explain: request lrp and/or cnn via --methods");

    auto [a, b] = load_inputs(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const PreprocessResult pre = preprocess_pipeline(a, b, cfg.prep);

    std::vector<std::string> artifacts;
    for (std::size_t ri = 0; ri < cfg.regions.size(); ++ri) {
        const RegionSpec region = region_by_name(cfg.regions[ri]);
        const SpectraSet data = extract_region(pre.merged, region);

        // Stratified train/test split.
        Rng rng(mix_seed(cfg.seed, 7000 + ri));
        std::vector<std::size_t> train_idx, test_idx;
        for (int label : {1, 0}) {
            std::vector<std::size_t> idx = data.indices_with_label(label);
            rng.shuffle(idx);
            const std::size_t n_test = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(cfg.explain_test_fraction *
                                                         static_cast<double>(idx.size()))));
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < n_test ? test_idx : train_idx).push_back(idx[i]);
        }
        std::sort(train_idx.begin(), train_idx.end());
        std::sort(test_idx.begin(), test_idx.end());
        const SpectraSet train = data.take_rows(train_idx);
        const SpectraSet test = data.take_rows(test_idx);

        if (want_lrp) {
            PoolingSpec spec = cfg.method_opts.pooling;
            if (spec.boundaries.empty()) spec = default_pooling(region.name);
            const Matrix train_f = pool_features(train, spec);
            const LogisticFit fit =
                fit_logistic(train_f, train.labels(), cfg.method_opts.shrinkage);
            const Matrix test_f = pool_features(test, spec);
            const ImportanceReport imp = permutation_importance(
                fit.model, test_f, test.labels(), pooling_band_labels(test.axis(), spec),
                cfg.n_permutations, mix_seed(cfg.seed, 7100 + ri));
            write_text_file(cfg.out_dir / ("importance_" + region.name + ".csv"),
                            importance_to_csv(imp));
            write_text_file(cfg.out_dir / ("model_lrp_" + region.name + ".json"),
                            logistic_to_json(fit.model));
            artifacts.push_back("importance_" + region.name + ".csv");
            artifacts.push_back("model_lrp_" + region.name + ".json");
        }

        if (want_cnn) {
            TrainConfig tc = cfg.method_opts.cnn_train;
            tc.seed = mix_seed(cfg.seed, 7200 + ri);
            const TrainedCNN trained = train_cnn(cfg.method_opts.cnn_arch, train, tc);
            const SaliencyMap map = saliency_map(trained.model, test, cfg.ecdf_scope);
            write_text_file(cfg.out_dir / ("saliency_" + region.name + ".csv"),
                            saliency_to_csv(map));
            write_text_file(cfg.out_dir / ("model_cnn_" + region.name + ".json"),
                            cnn_to_json(trained.model));
            write_text_file(cfg.out_dir / ("cnn_trace_" + region.name + ".csv"),
                            cnn_trace_to_csv(trained.trace));
            artifacts.push_back("saliency_" + region.name + ".csv");
            artifacts.push_back("model_cnn_" + region.name + ".json");
            artifacts.push_back("cnn_trace_" + region.name + ".csv");
        }
    }
    write_manifest(cfg, "explain", artifacts, json());
}

}  // namespace ramankit
