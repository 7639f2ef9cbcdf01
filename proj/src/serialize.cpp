#include "ramankit/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ramankit {

using nlohmann::json;

namespace {

std::string csv_num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string logistic_to_json(const LogisticModel& m) {
    json j;
    j["kind"] = "logistic";
    j["beta0"] = m.beta0;
    j["beta"] = m.beta;
    j["shrinkage"] = m.shrinkage;
    return j.dump(2);
}

LogisticModel logistic_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind") != "logistic") throw std::runtime_error("model kind is not 'logistic'");
    LogisticModel m;
    m.beta0 = j.at("beta0").get<double>();
    m.beta = j.at("beta").get<std::vector<double>>();
    m.shrinkage = j.at("shrinkage").get<double>();
    return m;
}

std::string l2d_to_json(const L2DModel& m) {
    json j;
    j["kind"] = "l2d";
    j["h1"] = m.h1;
    j["h2"] = m.h2;
    j["tau"] = m.tau;
    return j.dump(2);
}

L2DModel l2d_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind") != "l2d") throw std::runtime_error("model kind is not 'l2d'");
    L2DModel m;
    m.h1 = j.at("h1").get<std::vector<double>>();
    m.h2 = j.at("h2").get<std::vector<double>>();
    m.tau = j.at("tau").get<double>();
    return m;
}

std::string pca_to_json(const PCABasis& b) {
    json j;
    j["kind"] = "pca";
    j["column_means"] = b.column_means;
    j["components"] = b.components.data;  // row-major p x m
    j["rows"] = b.components.rows;
    j["cols"] = b.components.cols;
    j["eigenvalues"] = b.eigenvalues;
    j["eigenvalue_sum"] = b.eigenvalue_sum;
    j["n_samples"] = b.n_samples;
    return j.dump(2);
}

PCABasis pca_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind") != "pca") throw std::runtime_error("model kind is not 'pca'");
    PCABasis b;
    b.column_means = j.at("column_means").get<std::vector<double>>();
    b.components = Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    b.components.data = j.at("components").get<std::vector<double>>();
    if (b.components.data.size() != b.components.rows * b.components.cols)
        throw std::runtime_error("pca components array has the wrong size");
    b.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    b.eigenvalue_sum = j.at("eigenvalue_sum").get<double>();
    b.n_samples = j.at("n_samples").get<std::size_t>();
    return b;
}

namespace {

json conv_to_json(const ConvLayer& c) {
    return json{{"in_ch", c.in_ch}, {"out_ch", c.out_ch}, {"kernel", c.kernel},
                {"w", c.w},         {"b", c.b}};
}

ConvLayer conv_from_json(const json& j) {
    ConvLayer c;
    c.in_ch = j.at("in_ch").get<std::size_t>();
    c.out_ch = j.at("out_ch").get<std::size_t>();
    c.kernel = j.at("kernel").get<std::size_t>();
    c.w = j.at("w").get<std::vector<double>>();
    c.b = j.at("b").get<std::vector<double>>();
    if (c.w.size() != c.in_ch * c.out_ch * c.kernel || c.b.size() != c.out_ch)
        throw std::runtime_error("conv layer arrays have the wrong size");
    return c;
}

json dense_to_json(const DenseLayer& d) {
    return json{{"in", d.in}, {"out", d.out}, {"w", d.w}, {"b", d.b}};
}

DenseLayer dense_from_json(const json& j) {
    DenseLayer d;
    d.in = j.at("in").get<std::size_t>();
    d.out = j.at("out").get<std::size_t>();
    d.w = j.at("w").get<std::vector<double>>();
    d.b = j.at("b").get<std::vector<double>>();
    if (d.w.size() != d.in * d.out || d.b.size() != d.out)
        throw std::runtime_error("dense layer arrays have the wrong size");
    return d;
}

}  // namespace

std::string cnn_to_json(const CNNModel& m) {
    json arch{{"blocks", m.arch.blocks},   {"filters", m.arch.filters},
              {"kernel", m.arch.kernel},   {"pool", m.arch.pool},
              {"dropout", m.arch.dropout}, {"dense_width", m.arch.dense_width}};
    json j;
    j["kind"] = "cnn";
    j["arch"] = arch;
    j["input_length"] = m.input_length;
    j["seed"] = m.seed;
    j["conv_layers"] = json::array();
    for (const auto& c : m.convs) j["conv_layers"].push_back(conv_to_json(c));
    j["dense_hidden"] = dense_to_json(m.dense_hidden);
    j["dense_out"] = dense_to_json(m.dense_out);
    return j.dump();
}

CNNModel cnn_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind") != "cnn") throw std::runtime_error("model kind is not 'cnn'");
    CNNModel m;
    const json& a = j.at("arch");
    m.arch.blocks = a.at("blocks").get<int>();
    m.arch.filters = a.at("filters").get<int>();
    m.arch.kernel = a.at("kernel").get<int>();
    m.arch.pool = a.at("pool").get<int>();
    m.arch.dropout = a.at("dropout").get<double>();
    m.arch.dense_width = a.at("dense_width").get<int>();
    m.input_length = j.at("input_length").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const json& c : j.at("conv_layers")) m.convs.push_back(conv_from_json(c));
    m.dense_hidden = dense_from_json(j.at("dense_hidden"));
    m.dense_out = dense_from_json(j.at("dense_out"));
    return m;
}

std::string eval_report_to_json(const EvalReport& r) {
    json j;
    j["method"] = r.method;
    j["region"] = r.region;
    j["comparison"] = r.comparison;
    j["per_fold_auc"] = r.per_fold_auc;
    j["mean_auc"] = r.mean_auc;
    j["sem"] = r.sem;
    j["warnings"] = r.warnings;
    json tuned = json::object();
    for (const auto& [name, value] : r.tuned) tuned[name] = value;
    j["tuned"] = tuned;
    json rocs = json::array();
    for (const auto& fold : r.roc_points) {
        json pts = json::array();
        for (const auto& [fpr, tpr] : fold) pts.push_back(json::array({fpr, tpr}));
        rocs.push_back(pts);
    }
    j["roc_points"] = rocs;
    return j.dump(2);
}

std::string roc_to_csv(const EvalReport& r) {
    std::ostringstream out;
    out << "fold,fpr,tpr\n";
    for (std::size_t f = 0; f < r.roc_points.size(); ++f)
        for (const auto& [fpr, tpr] : r.roc_points[f])
            out << f << ',' << csv_num(fpr) << ',' << csv_num(tpr) << '\n';
    return out.str();
}

std::string importance_to_csv(const ImportanceReport& r) {
    std::ostringstream out;
    out << "band,importance,half_width_95,mean_permuted_auc,baseline_auc\n";
    for (const auto& e : r.features)
        out << e.label << ',' << csv_num(e.importance) << ',' << csv_num(e.half_width) << ','
            << csv_num(e.mean_permuted_auc) << ',' << csv_num(r.baseline_auc) << '\n';
    return out.str();
}

std::string saliency_to_csv(const SaliencyMap& m) {
    std::ostringstream out;
    out << "wavenumber,mean_saliency,half_width_95\n";
    for (std::size_t j = 0; j < m.wavenumbers.size(); ++j)
        out << csv_num(m.wavenumbers[j]) << ',' << csv_num(m.mean[j]) << ','
            << csv_num(m.half_width[j]) << '\n';
    return out.str();
}

std::string cnn_trace_to_csv(const std::vector<EpochStats>& trace) {
    std::ostringstream out;
    out << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e)
        out << e << ',' << csv_num(trace[e].train_loss) << ',' << csv_num(trace[e].val_loss)
            << '\n';
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ramankit
