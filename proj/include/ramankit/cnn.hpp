#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ramankit/rng.hpp"
#include "ramankit/spectra.hpp"

namespace ramankit {

double softplus(double x);        // log(1 + exp(x)), overflow-safe
double softplus_prime(double x);  // = sigmoid(x)
double sigmoid(double x);

/// Purely convolutional architecture: `blocks` repetitions of
/// conv(filters, kernel, softplus) -> maxpool(pool) -> dropout(rate),
/// then flatten -> dense(dense_width, softplus) -> dense(1, sigmoid).
struct CNNArch {
    int blocks = 3;
    int filters = 64;
    int kernel = 3;
    int pool = 2;
    double dropout = 0.25;
    int dense_width = 16;
};

struct TrainConfig {
    int batch_size = 64;
    double learning_rate = 0.001;
    int epochs = 100;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    // Early stopping; val_fraction = 0 disables the validation split.
    double val_fraction = 0.1;
    int patience = 10;
    // Optional stop once the epoch train loss drops below this (<= 0 = off).
    double target_train_loss = 0.0;
};

struct ConvLayer {
    std::size_t in_ch = 0, out_ch = 0, kernel = 0;
    std::vector<double> w;  // [out][in][k]
    std::vector<double> b;  // [out]
};

struct DenseLayer {
    std::size_t in = 0, out = 0;
    std::vector<double> w;  // [out][in]
    std::vector<double> b;  // [out]
};

struct CNNModel {
    CNNArch arch;
    std::size_t input_length = 0;
    std::uint64_t seed = 0;
    std::vector<ConvLayer> convs;
    DenseLayer dense_hidden;
    DenseLayer dense_out;

    /// Glorot-uniform weights (zero biases) for the given input length.
    static CNNModel init(const CNNArch& arch, std::size_t input_length, std::uint64_t seed);
};

/// Smallest input length the architecture can propagate (one element must
/// survive every conv + pool block).
std::size_t min_input_length(const CNNArch& arch);

/// Gradient arrays shaped like the model parameters, plus the gradient with
/// respect to the input spectrum.
struct CNNGrads {
    std::vector<std::vector<double>> conv_w, conv_b;
    std::vector<double> hidden_w, hidden_b;
    std::vector<double> out_w, out_b;
    std::vector<double> input;

    static CNNGrads zeros_like(const CNNModel& m);
};

/// Opaque per-sample activations retained for backpropagation.
struct ForwardCache;

/// Deterministic inference pass (dropout off).
double forward_eval(const CNNModel& m, std::span<const double> x);

/// Pre-sigmoid output of the eval pass; pairs with bce_from_logit.
double forward_logit(const CNNModel& m, std::span<const double> x);

/// Training pass with inverted dropout; masks come from `rng`.
/// `cache` may be null when only the output is needed.
double forward(const CNNModel& m, std::span<const double> x, bool train_mode, Rng* rng,
               ForwardCache* cache);

/// Exact backpropagation of the binary cross-entropy loss for target y
/// (soft targets allowed). Eval-mode activations.
CNNGrads gradient(const CNNModel& m, std::span<const double> x, double y);

/// Gradient of the raw output probability with respect to the input; used by
/// the saliency map.
std::vector<double> output_input_gradient(const CNNModel& m, std::span<const double> x);

/// Numerically stable BCE of a sigmoid output given its pre-activation.
double bce_from_logit(double logit, double y);

/// Max pooling with trailing truncation; argmax (first max on ties) recorded
/// for gradient routing.
std::vector<double> maxpool_forward(std::span<const double> x, std::size_t size,
                                    std::vector<std::size_t>* argmax);

struct EpochStats {
    double train_loss = 0.0;  // eval-mode mean BCE over the fitting rows
    double val_loss = 0.0;    // NaN when no validation split
};

struct TrainedCNN {
    CNNModel model;
    std::vector<EpochStats> trace;
    bool stopped_early = false;
};

/// Shuffled mini-batch ADAM on BCE. Aborts with diagnostics if the loss goes
/// non-finite. Bitwise reproducible for a fixed config.
TrainedCNN train_cnn(const CNNArch& arch, const SpectraSet& data, const TrainConfig& cfg);

}  // namespace ramankit
