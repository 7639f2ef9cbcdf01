#include "ramankit/spectra.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace ramankit {

namespace {

constexpr double kRegionSlack = 1e-9;  // absolute tolerance on region bounds

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view tok, std::size_t line_no, std::size_t col_no) {
    // Tolerate surrounding spaces; from_chars itself is strict.
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
        tok.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw std::runtime_error("spectra csv: row " + std::to_string(line_no) + ", column " +
                                 std::to_string(col_no) + ": cannot parse '" + std::string(tok) +
                                 "' as a number");
    if (!std::isfinite(v))
        throw std::runtime_error("spectra csv: row " + std::to_string(line_no) + ", column " +
                                 std::to_string(col_no) + ": non-finite value");
    return v;
}

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
    std::vector<double> out;
    std::size_t start = 0;
    std::size_t col = 1;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string_view tok(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
        out.push_back(parse_double(tok, line_no, col));
        if (comma == std::string::npos) break;
        start = comma + 1;
        ++col;
    }
    return out;
}

}  // namespace

RegionSpec lw_region() { return {"LW", 125.25, 549.27}; }
RegionSpec hw_region() { return {"HW", 2303.16, 3399.83}; }

RegionSpec region_by_name(const std::string& name) {
    if (name == "LW") return lw_region();
    if (name == "HW") return hw_region();
    throw std::invalid_argument("unknown region '" + name + "' (expected LW or HW)");
}

void validate_axis(const WavenumberAxis& axis) {
    if (axis.size() < 2) throw std::runtime_error("axis must have at least 2 wavenumbers");
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        if (!(axis.values[i] < axis.values[i + 1]))
            throw std::runtime_error("axis not strictly increasing at position " +
                                     std::to_string(i + 1) + " (" +
                                     format_double(axis.values[i]) + " then " +
                                     format_double(axis.values[i + 1]) + ")");
        if (!std::isfinite(axis.values[i]))
            throw std::runtime_error("axis value not finite at position " + std::to_string(i));
    }
}

SpectraSet SpectraSet::create(WavenumberAxis axis, Matrix matrix, std::vector<int> labels,
                              std::array<std::string, 2> sample_names) {
    validate_axis(axis);
    if (matrix.cols != axis.size())
        throw std::runtime_error("row length " + std::to_string(matrix.cols) +
                                 " does not match axis length " + std::to_string(axis.size()));
    if (labels.size() != matrix.rows)
        throw std::runtime_error("label count does not match row count");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw std::runtime_error("label at row " + std::to_string(i) + " is not 0 or 1");
    for (std::size_t i = 0; i < matrix.data.size(); ++i)
        if (!std::isfinite(matrix.data[i]))
            throw std::runtime_error("non-finite intensity at row " +
                                     std::to_string(i / matrix.cols) + ", column " +
                                     std::to_string(i % matrix.cols));

    SpectraSet s;
    s.axis_ = std::move(axis);
    s.matrix_ = std::move(matrix);
    s.labels_ = std::move(labels);
    s.sample_names_ = std::move(sample_names);
    return s;
}

std::vector<std::size_t> SpectraSet::indices_with_label(int label) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) idx.push_back(i);
    return idx;
}

SpectraSet SpectraSet::take_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), n_cols());
    std::vector<int> lab(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto r = row(idx[i]);
        std::copy(r.begin(), r.end(), m.row(i).begin());
        lab[i] = labels_[idx[i]];
    }
    return SpectraSet::create(axis_, std::move(m), std::move(lab), sample_names_);
}

SpectraSet load_spectra(const std::filesystem::path& path, int label,
                        const std::string& sample_name) {
    if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectra file: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    WavenumberAxis axis;
    std::vector<double> flat;
    std::size_t n_rows = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF)
            line.erase(0, 3);  // UTF-8 BOM
        if (line.empty()) continue;
        std::vector<double> vals = parse_row(line, line_no);
        if (axis.values.empty()) {
            axis.values = std::move(vals);
        } else {
            if (vals.size() != axis.size())
                throw std::runtime_error("spectra csv: row " + std::to_string(line_no) + " has " +
                                         std::to_string(vals.size()) + " values, axis has " +
                                         std::to_string(axis.size()));
            flat.insert(flat.end(), vals.begin(), vals.end());
            ++n_rows;
        }
    }
    if (axis.values.empty()) throw std::runtime_error("spectra csv: empty file " + path.string());

    Matrix m(n_rows, axis.size());
    m.data = std::move(flat);
    std::array<std::string, 2> names{"", ""};
    const std::string display = sample_name.empty() ? path.stem().string() : sample_name;
    names[label == 1 ? 0 : 1] = display;
    return SpectraSet::create(std::move(axis), std::move(m),
                              std::vector<int>(n_rows, label), std::move(names));
}

void save_spectra(const SpectraSet& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write spectra file: " + path.string());
    for (std::size_t j = 0; j < s.axis().size(); ++j) {
        if (j) out << ',';
        out << format_double(s.axis().values[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto r = s.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out << ',';
            out << format_double(r[j]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

SpectraSet merge(const SpectraSet& a, const SpectraSet& b) {
    if (!(a.axis() == b.axis()))
        throw std::runtime_error("merge: wavenumber axes differ");
    for (int l : a.labels())
        if (l != 1) throw std::runtime_error("merge: first set must be all label 1");
    for (int l : b.labels())
        if (l != 0) throw std::runtime_error("merge: second set must be all label 0");

    Matrix m(a.n_rows() + b.n_rows(), a.n_cols());
    std::copy(a.matrix().data.begin(), a.matrix().data.end(), m.data.begin());
    std::copy(b.matrix().data.begin(), b.matrix().data.end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(a.matrix().data.size()));
    std::vector<int> labels(m.rows, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(a.n_rows()), 1);

    std::array<std::string, 2> names = {a.sample_names()[0], b.sample_names()[1]};
    return SpectraSet::create(a.axis(), std::move(m), std::move(labels), std::move(names));
}

SpectraSet extract_region(const SpectraSet& s, const RegionSpec& r) {
    if (!(r.lo < r.hi))
        throw std::invalid_argument("region '" + r.name + "': lo must be < hi");
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < s.axis().size(); ++j) {
        const double w = s.axis().values[j];
        if (w >= r.lo - kRegionSlack && w <= r.hi + kRegionSlack) cols.push_back(j);
    }
    if (cols.empty())
        throw std::runtime_error("region '" + r.name + "' selects no wavenumbers");

    WavenumberAxis axis;
    axis.values.reserve(cols.size());
    for (std::size_t j : cols) axis.values.push_back(s.axis().values[j]);

    Matrix m(s.n_rows(), cols.size());
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto src = s.row(i);
        auto dst = m.row(i);
        for (std::size_t k = 0; k < cols.size(); ++k) dst[k] = src[cols[k]];
    }
    return SpectraSet::create(std::move(axis), std::move(m), s.labels(), s.sample_names());
}

}  // namespace ramankit
