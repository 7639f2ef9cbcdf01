#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ramankit/matrix.hpp"

namespace ramankit {

/// One intensity vector; always aligned to some WavenumberAxis.
using Spectrum = std::vector<double>;

/// Strictly increasing Raman-shift axis in cm^-1.
struct WavenumberAxis {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool operator==(const WavenumberAxis&) const = default;
};

/// Named contiguous wavenumber window; bounds inclusive on both ends.
struct RegionSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

RegionSpec lw_region();  // 125.25 - 549.27 cm^-1
RegionSpec hw_region();  // 2303.16 - 3399.83 cm^-1
RegionSpec region_by_name(const std::string& name);

/// N spectra on a shared axis with binary labels. Label 1 marks the first
/// sample of a pairwise comparison. Immutable once built; all operations
/// below return fresh sets.
class SpectraSet {
public:
    SpectraSet() = default;

    /// Validates row lengths, label values and axis monotonicity.
    static SpectraSet create(WavenumberAxis axis, Matrix matrix, std::vector<int> labels,
                             std::array<std::string, 2> sample_names);

    const WavenumberAxis& axis() const { return axis_; }
    const Matrix& matrix() const { return matrix_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::array<std::string, 2>& sample_names() const { return sample_names_; }

    std::size_t n_rows() const { return matrix_.rows; }
    std::size_t n_cols() const { return matrix_.cols; }
    std::span<const double> row(std::size_t i) const { return matrix_.row(i); }

    /// Rows with the given label, in original order.
    std::vector<std::size_t> indices_with_label(int label) const;

    /// Subset by row indices; axis and names carried over.
    SpectraSet take_rows(const std::vector<std::size_t>& idx) const;

private:
    WavenumberAxis axis_;
    Matrix matrix_;
    std::vector<int> labels_;
    std::array<std::string, 2> sample_names_;
};

void validate_axis(const WavenumberAxis& axis);

/// Reads the spectra CSV format: header row = axis, one spectrum per
/// following row. All rows get the supplied label.
SpectraSet load_spectra(const std::filesystem::path& path, int label,
                        const std::string& sample_name = "");

/// Writes the same format with shortest round-trip decimal formatting.
void save_spectra(const SpectraSet& s, const std::filesystem::path& path);

/// Row-stacks a (labels all 1) on top of b (labels all 0). Axes must match
/// exactly.
SpectraSet merge(const SpectraSet& a, const SpectraSet& b);

/// Keeps the columns with lo <= wavenumber <= hi. Errors on empty selection.
SpectraSet extract_region(const SpectraSet& s, const RegionSpec& r);

}  // namespace ramankit
