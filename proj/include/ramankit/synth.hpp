#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ramankit/spectra.hpp"

namespace ramankit {

struct PeakSpec {
    enum class Shape { kLorentzian, kGaussian };

    double center = 0.0;     // cm^-1
    double width = 1.0;      // half-width (Lorentzian) or sigma (Gaussian)
    double amplitude = 0.0;  // >= 0
    Shape shape = Shape::kLorentzian;
};

/// Peak-sum recipe for one sample class. Each generated spectrum is
///   scale * sum(jittered peaks) + baseline + iid Gaussian noise
/// where `scale` is one per-spectrum multiplicative draw (the dominant
/// intensity variation of drop-cast SERS maps) and each peak amplitude gets
/// an independent relative jitter.
struct ClassRecipe {
    std::vector<PeakSpec> peaks;
    double baseline = 0.0;
    double noise_sigma = 0.0;
    double amplitude_jitter = 0.0;  // relative std per peak
    double scale_jitter = 0.0;      // relative std of the common scale factor
};

/// Unit-amplitude peak profile at wavenumber w.
double peak_value(const PeakSpec& peak, double w);

/// Noise-free expected spectrum (scale and jitters at their mean of 1).
std::vector<double> expected_spectrum(const ClassRecipe& recipe, const WavenumberAxis& axis);

/// Uniform grid over [lo, hi] with exact endpoints.
WavenumberAxis uniform_axis(double lo, double hi, std::size_t n);

/// The bundled reference axis: 221 points over 125.25-549.27 plus 570 points
/// over 2303.16-3399.83, so the LW/HW selections have the documented sizes.
WavenumberAxis reference_axis();

/// n_per_class spectra per recipe; recipe1 rows carry label 1. Row RNG
/// streams are split from the seed, so any row is reproducible on its own.
SpectraSet generate(const ClassRecipe& recipe1, const ClassRecipe& recipe2,
                    std::size_t n_per_class, const WavenumberAxis& axis, std::uint64_t seed,
                    std::array<std::string, 2> sample_names = {"sample1", "sample2"});

struct SynthPreset {
    ClassRecipe first;
    ClassRecipe second;
    std::array<std::string, 2> sample_names;
};

/// Named class pairs: "melanoma_like" (514 cm^-1 weight and 3200-3400
/// shoulder differ), "colon_like" (only the 2934 cm^-1 band differs),
/// "null" (identical recipes).
SynthPreset preset(const std::string& name);

}  // namespace ramankit
