#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ramankit/cnn.hpp"
#include "ramankit/eval.hpp"
#include "ramankit/explain.hpp"
#include "ramankit/linear_models.hpp"
#include "ramankit/methods.hpp"
#include "ramankit/pipeline.hpp"
#include "ramankit/preprocess.hpp"
#include "ramankit/spectra.hpp"
#include "ramankit/synth.hpp"

namespace py = pybind11;
using namespace ramankit;

namespace {

Matrix np_to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + arr.size(), m.data.begin());
    return m;
}

py::array_t<double> matrix_to_np(const Matrix& m) {
    py::array_t<double> arr({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
    return arr;
}

py::array_t<double> vec_to_np(const std::vector<double>& v) {
    py::array_t<double> arr(v.size());
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

SpectraSet make_set(const py::array_t<double>& axis, const py::array_t<double>& matrix,
                    const std::vector<int>& labels, const std::string& name_a,
                    const std::string& name_b) {
    WavenumberAxis ax;
    ax.values.assign(axis.data(), axis.data() + axis.size());
    return SpectraSet::create(std::move(ax), np_to_matrix(matrix), labels, {name_a, name_b});
}

py::dict report_to_dict(const EvalReport& r) {
    py::dict d;
    d["method"] = r.method;
    d["region"] = r.region;
    d["comparison"] = r.comparison;
    d["per_fold_auc"] = vec_to_np(r.per_fold_auc);
    d["mean_auc"] = r.mean_auc;
    d["sem"] = r.sem;
    d["warnings"] = r.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral classification toolkit: preprocessing, five classifiers, "
              "cross-validated ROC-AUC, interpretability.";
    m.attr("__version__") = kVersion;

    py::class_<SpectraSet>(m, "SpectraSet")
        .def(py::init(&make_set), py::arg("axis"), py::arg("matrix"), py::arg("labels"),
             py::arg("name_a") = "sample1", py::arg("name_b") = "sample2")
        .def_property_readonly("axis",
                               [](const SpectraSet& s) { return vec_to_np(s.axis().values); })
        .def_property_readonly("matrix",
                               [](const SpectraSet& s) { return matrix_to_np(s.matrix()); })
        .def_property_readonly("labels", [](const SpectraSet& s) { return s.labels(); })
        .def_property_readonly("sample_names",
                               [](const SpectraSet& s) { return s.sample_names(); })
        .def_property_readonly("n_rows", &SpectraSet::n_rows)
        .def_property_readonly("n_cols", &SpectraSet::n_cols);

    m.def("load_spectra", &load_spectra, py::arg("path"), py::arg("label"),
          py::arg("sample_name") = "");
    m.def("save_spectra", &save_spectra, py::arg("spectra"), py::arg("path"));
    m.def("merge", &merge, py::arg("a"), py::arg("b"));
    m.def(
        "extract_region",
        [](const SpectraSet& s, const std::string& name) {
            return extract_region(s, region_by_name(name));
        },
        py::arg("spectra"), py::arg("region"), "Select the LW or HW window");
    m.def("reference_axis", [] { return vec_to_np(reference_axis().values); });

    m.def(
        "generate_preset",
        [](const std::string& name, std::size_t n_per_class, std::uint64_t seed) {
            const SynthPreset p = preset(name);
            return generate(p.first, p.second, n_per_class, reference_axis(), seed,
                            p.sample_names);
        },
        py::arg("name"), py::arg("n_per_class"), py::arg("seed") = 0,
        "Synthetic spectra for 'melanoma_like', 'colon_like' or 'null'");

    m.def("sg_coefficients",
          [](int window, int order) { return vec_to_np(sg_coefficients({window, order})); },
          py::arg("window") = 91, py::arg("order") = 3);
    m.def(
        "smooth",
        [](const SpectraSet& s, int window, int order) {
            return smooth(s, {window, order});
        },
        py::arg("spectra"), py::arg("window") = 91, py::arg("order") = 3);
    m.def(
        "reject_outliers",
        [](const SpectraSet& s, double k) {
            RejectionResult r = reject_outliers(s, fit_surface(s, k));
            return py::make_tuple(std::move(r.kept), r.rejected_indices);
        },
        py::arg("spectra"), py::arg("k") = 3.0,
        "Returns (kept SpectraSet, rejected row indices)");

    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            const RocCurve r = roc_auc(scores, labels);
            py::array_t<double> pts({r.points.size(), std::size_t(2)});
            auto view = pts.mutable_unchecked<2>();
            for (std::size_t i = 0; i < r.points.size(); ++i) {
                view(i, 0) = r.points[i].first;
                view(i, 1) = r.points[i].second;
            }
            return py::make_tuple(r.auc, pts);
        },
        py::arg("scores"), py::arg("labels"), "Returns (auc, roc points)");

    m.def(
        "fit_pca",
        [](const SpectraSet& s, std::size_t n_components) {
            const PCABasis b = fit_pca(s, n_components);
            py::dict d;
            d["column_means"] = vec_to_np(b.column_means);
            d["components"] = matrix_to_np(b.components);
            d["eigenvalues"] = vec_to_np(b.eigenvalues);
            d["proportions"] = vec_to_np(variance_proportions(b));
            d["projections"] = matrix_to_np(project(s, b));
            return d;
        },
        py::arg("spectra"), py::arg("n_components") = 5);

    m.def(
        "cross_validate",
        [](const SpectraSet& data, const std::string& method_name, std::size_t folds,
           std::uint64_t seed, int cnn_epochs, int cnn_patience, unsigned threads) {
            MethodOptions opts;
            opts.cnn_train.epochs = cnn_epochs;
            opts.cnn_train.patience = cnn_patience;
            const std::string region =
                data.n_cols() == 570 ? "HW" : "LW";  // pooling default by width
            const Method method =
                make_method(method_kind_from_string(method_name), opts, region);
            const FoldPlan plan = make_folds(data.labels(), folds, mix_seed(seed, 0));
            CrossValidateOptions cv;
            cv.seed = mix_seed(seed, 1);
            cv.threads = threads;
            return report_to_dict(cross_validate(method, data, plan, cv));
        },
        py::arg("spectra"), py::arg("method"), py::arg("folds") = 10, py::arg("seed") = 0,
        py::arg("cnn_epochs") = 30, py::arg("cnn_patience") = 5, py::arg("threads") = 0,
        "Ten-fold cross-validated ROC-AUC for one of lra, l2d, lrp, pca, cnn");

    py::class_<TrainedCNN>(m, "TrainedCNN")
        .def_property_readonly("epochs_run",
                               [](const TrainedCNN& t) { return t.trace.size(); })
        .def_property_readonly("train_loss",
                               [](const TrainedCNN& t) {
                                   std::vector<double> v;
                                   for (const auto& e : t.trace) v.push_back(e.train_loss);
                                   return vec_to_np(v);
                               })
        .def("predict",
             [](const TrainedCNN& t, const SpectraSet& s) {
                 std::vector<double> out(s.n_rows());
                 for (std::size_t i = 0; i < s.n_rows(); ++i)
                     out[i] = forward_eval(t.model, s.row(i));
                 return vec_to_np(out);
             })
        .def("saliency", [](const TrainedCNN& t, const SpectraSet& s) {
            const SaliencyMap map = saliency_map(t.model, s);
            py::dict d;
            d["wavenumbers"] = vec_to_np(map.wavenumbers);
            d["mean"] = vec_to_np(map.mean);
            d["half_width"] = vec_to_np(map.half_width);
            return d;
        });

    m.def(
        "train_cnn",
        [](const SpectraSet& data, int epochs, int batch_size, double learning_rate,
           std::uint64_t seed, double val_fraction, int patience) {
            TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.batch_size = batch_size;
            cfg.learning_rate = learning_rate;
            cfg.seed = seed;
            cfg.val_fraction = val_fraction;
            cfg.patience = patience;
            return train_cnn(CNNArch{}, data, cfg);
        },
        py::arg("spectra"), py::arg("epochs") = 100, py::arg("batch_size") = 64,
        py::arg("learning_rate") = 0.001, py::arg("seed") = 0, py::arg("val_fraction") = 0.1,
        py::arg("patience") = 10);

    m.def(
        "lrp_importance",
        [](const SpectraSet& train, const SpectraSet& test, int n_perm, std::uint64_t seed) {
            const std::string region = train.n_cols() == 570 ? "HW" : "LW";
            const PoolingSpec spec = default_pooling(region);
            const Matrix train_f = pool_features(train, spec);
            const LogisticFit fit = fit_logistic(train_f, train.labels(), 1.0);
            const Matrix test_f = pool_features(test, spec);
            const ImportanceReport rep = permutation_importance(
                fit.model, test_f, test.labels(), pooling_band_labels(test.axis(), spec),
                n_perm, seed);
            py::list rows;
            for (const auto& e : rep.features) {
                py::dict d;
                d["band"] = e.label;
                d["importance"] = e.importance;
                d["half_width"] = e.half_width;
                rows.append(d);
            }
            return rows;
        },
        py::arg("train"), py::arg("test"), py::arg("n_permutations") = 30, py::arg("seed") = 0,
        "Permutation importance of the pooled-band logistic regression");

    // Command-level entry points (same behaviour as the CLI subcommands).
    m.def(
        "run_synth",
        [](const std::string& preset_name, std::size_t n_per_class, std::uint64_t seed,
           const std::filesystem::path& out_dir) {
            SynthConfig cfg;
            cfg.preset_name = preset_name;
            cfg.n_per_class = n_per_class;
            cfg.seed = seed;
            cfg.out_dir = out_dir;
            const auto [a, b] = cmd_synth(cfg);
            return py::make_tuple(a.string(), b.string());
        },
        py::arg("preset") = "colon_like", py::arg("n_per_class") = 200, py::arg("seed") = 0,
        py::arg("out_dir") = "out");
    m.def(
        "run_evaluate",
        [](const std::filesystem::path& input_a, const std::filesystem::path& input_b,
           const std::filesystem::path& out_dir, const std::vector<std::string>& regions,
           const std::vector<std::string>& methods, std::size_t folds, std::uint64_t seed,
           int cnn_epochs) {
            RunConfig cfg;
            cfg.input_a = input_a;
            cfg.input_b = input_b;
            cfg.out_dir = out_dir;
            cfg.regions = regions;
            cfg.methods.clear();
            for (const auto& name : methods)
                cfg.methods.push_back(method_kind_from_string(name));
            cfg.folds = folds;
            cfg.seed = seed;
            cfg.method_opts.cnn_train.epochs = cnn_epochs;
            cmd_evaluate(cfg);
        },
        py::arg("input_a"), py::arg("input_b"), py::arg("out_dir"),
        py::arg("regions") = std::vector<std::string>{"LW", "HW"},
        py::arg("methods") = std::vector<std::string>{"lra", "l2d", "lrp", "pca", "cnn"},
        py::arg("folds") = 10, py::arg("seed") = 0, py::arg("cnn_epochs") = 100);
}
