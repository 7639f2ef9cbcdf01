#include "ramankit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ramankit/matrix.hpp"
#include "ramankit/rng.hpp"

namespace ramankit {

double peak_value(const PeakSpec& peak, double w) {
    const double d = w - peak.center;
    if (peak.shape == PeakSpec::Shape::kLorentzian) {
        const double w2 = peak.width * peak.width;
        return w2 / (w2 + d * d);
    }
    return std::exp(-d * d / (2.0 * peak.width * peak.width));
}

std::vector<double> expected_spectrum(const ClassRecipe& recipe, const WavenumberAxis& axis) {
    std::vector<double> out(axis.size(), recipe.baseline);
    for (const PeakSpec& p : recipe.peaks) {
        if (p.width <= 0) throw std::invalid_argument("synth: peak width must be > 0");
        if (p.amplitude < 0) throw std::invalid_argument("synth: peak amplitude must be >= 0");
        for (std::size_t j = 0; j < axis.size(); ++j)
            out[j] += p.amplitude * peak_value(p, axis.values[j]);
    }
    return out;
}

WavenumberAxis uniform_axis(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo < hi)) throw std::invalid_argument("uniform_axis: bad parameters");
    WavenumberAxis axis;
    axis.values.resize(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) axis.values[i] = lo + step * static_cast<double>(i);
    axis.values.front() = lo;
    axis.values.back() = hi;
    return axis;
}

WavenumberAxis reference_axis() {
    WavenumberAxis lw = uniform_axis(125.25, 549.27, 221);
    const WavenumberAxis hw = uniform_axis(2303.16, 3399.83, 570);
    lw.values.insert(lw.values.end(), hw.values.begin(), hw.values.end());
    return lw;
}

SpectraSet generate(const ClassRecipe& recipe1, const ClassRecipe& recipe2,
                    std::size_t n_per_class, const WavenumberAxis& axis, std::uint64_t seed,
                    std::array<std::string, 2> sample_names) {
    if (n_per_class < 1) throw std::invalid_argument("generate: n_per_class must be >= 1");
    validate_axis(axis);
    const std::size_t p = axis.size();

    Matrix m(2 * n_per_class, p);
    std::vector<int> labels(2 * n_per_class, 0);
    const Rng root(seed);

    auto fill_row = [&](const ClassRecipe& recipe, std::size_t row, std::uint64_t stream) {
        Rng rng = root.split(stream);
        double scale = 1.0;
        if (recipe.scale_jitter > 0.0)
            scale = std::max(0.05, 1.0 + recipe.scale_jitter * rng.normal());
        auto out = m.row(row);
        std::fill(out.begin(), out.end(), 0.0);
        for (const PeakSpec& peak : recipe.peaks) {
            if (peak.width <= 0) throw std::invalid_argument("synth: peak width must be > 0");
            double amp = peak.amplitude;
            if (recipe.amplitude_jitter > 0.0)
                amp *= std::max(0.0, 1.0 + recipe.amplitude_jitter * rng.normal());
            for (std::size_t j = 0; j < p; ++j) out[j] += amp * peak_value(peak, axis.values[j]);
        }
        for (std::size_t j = 0; j < p; ++j) {
            out[j] = scale * out[j] + recipe.baseline;
            if (recipe.noise_sigma > 0.0) out[j] += recipe.noise_sigma * rng.normal();
        }
    };

    for (std::size_t i = 0; i < n_per_class; ++i) {
        fill_row(recipe1, i, i);
        labels[i] = 1;
    }
    for (std::size_t i = 0; i < n_per_class; ++i)
        fill_row(recipe2, n_per_class + i, n_per_class + i);

    return SpectraSet::create(axis, std::move(m), std::move(labels), std::move(sample_names));
}

namespace {

// Shared SERS-like profile: Ag-N band, Si peak, broad low-wavenumber
// background, CH stretching band, high-wavenumber shoulder.
ClassRecipe base_recipe() {
    ClassRecipe r;
    r.peaks = {
        {234.0, 30.0, 900.0, PeakSpec::Shape::kLorentzian},
        {514.0, 12.0, 600.0, PeakSpec::Shape::kLorentzian},
        {300.0, 200.0, 300.0, PeakSpec::Shape::kLorentzian},
        {2934.0, 50.0, 1000.0, PeakSpec::Shape::kLorentzian},
        {3250.0, 80.0, 250.0, PeakSpec::Shape::kGaussian},
    };
    r.baseline = 150.0;
    r.noise_sigma = 25.0;
    r.amplitude_jitter = 0.10;
    r.scale_jitter = 0.15;
    return r;
}

}  // namespace

SynthPreset preset(const std::string& name) {
    if (name == "null") {
        const ClassRecipe r = base_recipe();
        return {r, r, {"null_a", "null_b"}};
    }
    if (name == "melanoma_like") {
        // Subtypes differ in the Si-peak weight (480-548 sub-band) and the
        // 3200-3400 shoulder.
        const ClassRecipe a = base_recipe();
        ClassRecipe b = a;
        b.peaks[1].amplitude = 680.0;   // 514 cm^-1
        b.peaks[4].amplitude = 330.0;   // 3250 cm^-1 shoulder
        return {a, b, {"mel_a", "mel_b"}};
    }
    if (name == "colon_like") {
        // Methylation-like contrast: only the CH band near 2934 cm^-1
        // differs; the extra component stays inside 2700-3200.
        const ClassRecipe a = base_recipe();
        ClassRecipe b = a;
        b.peaks.push_back({2934.0, 40.0, 800.0, PeakSpec::Shape::kGaussian});
        return {a, b, {"colon_a", "colon_b"}};
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected melanoma_like, colon_like or null)");
}

}  // namespace ramankit
