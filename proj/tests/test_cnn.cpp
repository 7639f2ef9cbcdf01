#include <doctest.h>

#include <cmath>

#include "ramankit/cnn.hpp"
#include "ramankit/rng.hpp"
#include "ramankit/spectra.hpp"

using namespace ramankit;

namespace {

CNNArch tiny_arch() {
    CNNArch a;
    a.blocks = 1;
    a.filters = 2;
    a.kernel = 3;
    a.pool = 2;
    a.dropout = 0.25;
    a.dense_width = 16;
    return a;
}

SpectraSet two_prototypes(std::size_t copies, std::size_t p, double noise, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(2 * copies, p);
    std::vector<int> labels(2 * copies, 0);
    for (std::size_t i = 0; i < 2 * copies; ++i) {
        const bool first = i < copies;
        labels[i] = first ? 1 : 0;
        for (std::size_t j = 0; j < p; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(p - 1);
            const double base = first ? std::sin(6.28 * t) : std::cos(6.28 * t) * 0.5;
            m.at(i, j) = 2.0 + base + noise * rng.normal();
        }
    }
    WavenumberAxis axis;
    for (std::size_t j = 0; j < p; ++j) axis.values.push_back(static_cast<double>(j + 1));
    return SpectraSet::create(std::move(axis), std::move(m), std::move(labels), {"a", "b"});
}

// Relative disagreement with both-tiny gradients treated as equal.
double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-10) return 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("softplus values and derivative") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(softplus(1000.0) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(softplus(-1000.0) == doctest::Approx(0.0).epsilon(1e-12));
    const double h = 1e-6;
    const double fd = (softplus(h) - softplus(-h)) / (2 * h);
    CHECK(std::abs(softplus_prime(0.0) - 0.5) < 1e-12);
    CHECK(std::abs(fd - 0.5) < 1e-8);
}

TEST_CASE("maxpool forward and gradient routing") {
    std::vector<std::size_t> argmax;
    const std::vector<double> x = {3, 1, 4, 1};
    const auto out = maxpool_forward(x, 2, &argmax);
    CHECK(out == std::vector<double>{3, 4});
    CHECK(argmax == std::vector<std::size_t>{0, 2});

    SUBCASE("odd length truncates the trailing element") {
        const auto out2 = maxpool_forward(std::vector<double>{5, 2, 9}, 2, nullptr);
        CHECK(out2 == std::vector<double>{5});
    }
    SUBCASE("ties go to the first maximum") {
        std::vector<std::size_t> arg2;
        maxpool_forward(std::vector<double>{7, 7}, 2, &arg2);
        CHECK(arg2 == std::vector<std::size_t>{0});
    }
}

TEST_CASE("forward output is a probability and eval mode is deterministic") {
    const CNNModel m = CNNModel::init(tiny_arch(), 16, 42);
    Rng rng(1);
    std::vector<double> x(16);
    for (int t = 0; t < 1000; ++t) {
        for (auto& v : x) v = rng.normal() * 3.0;
        const double o = forward_eval(m, x);
        CHECK(o > 0.0);
        CHECK(o < 1.0);
    }
    // two eval calls and two models from the same seed agree bitwise
    for (auto& v : x) v = rng.normal();
    CHECK(forward_eval(m, x) == forward_eval(m, x));
    const CNNModel m2 = CNNModel::init(tiny_arch(), 16, 42);
    CHECK(forward_eval(m2, x) == forward_eval(m, x));

    SUBCASE("eval mode ignores dropout rng state") {
        Rng r1(7), r2(993137);
        const double a = forward(m, x, false, &r1, nullptr);
        const double b = forward(m, x, false, &r2, nullptr);
        CHECK(a == b);
    }
    SUBCASE("input length is checked with the minimum in the message") {
        CHECK(min_input_length(tiny_arch()) == 4);
        CNNArch deep;
        CHECK(min_input_length(deep) == 22);
        std::vector<double> tiny(3, 0.0);
        CHECK_THROWS_WITH_AS(forward_eval(CNNModel::init(tiny_arch(), 16, 0), tiny),
                             doctest::Contains("16"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(CNNModel::init(deep, 21, 0), doctest::Contains("minimum 22"),
                             std::invalid_argument);
    }
}

TEST_CASE("backprop matches centered finite differences on a tiny net") {
    const CNNArch arch = tiny_arch();
    CNNModel m = CNNModel::init(arch, 16, 7);
    Rng rng(3);
    std::vector<double> x(16);
    for (auto& v : x) v = rng.normal();
    const double y = 1.0;

    const CNNGrads g = gradient(m, x, y);
    const double step = 1e-5;
    double worst = 0.0;

    auto loss_now = [&]() { return bce_from_logit(forward_logit(m, x), y); };
    auto check_param = [&](double* w, double analytic) {
        const double orig = *w;
        *w = orig + step;
        const double lp = loss_now();
        *w = orig - step;
        const double lm = loss_now();
        *w = orig;
        worst = std::max(worst, rel_err((lp - lm) / (2 * step), analytic));
    };

    for (std::size_t b = 0; b < m.convs.size(); ++b) {
        for (std::size_t i = 0; i < m.convs[b].w.size(); ++i)
            check_param(&m.convs[b].w[i], g.conv_w[b][i]);
        for (std::size_t i = 0; i < m.convs[b].b.size(); ++i)
            check_param(&m.convs[b].b[i], g.conv_b[b][i]);
    }
    for (std::size_t i = 0; i < m.dense_hidden.w.size(); ++i)
        check_param(&m.dense_hidden.w[i], g.hidden_w[i]);
    for (std::size_t i = 0; i < m.dense_hidden.b.size(); ++i)
        check_param(&m.dense_hidden.b[i], g.hidden_b[i]);
    for (std::size_t i = 0; i < m.dense_out.w.size(); ++i)
        check_param(&m.dense_out.w[i], g.out_w[i]);
    check_param(&m.dense_out.b[0], g.out_b[0]);
    CHECK(worst < 1e-4);

    SUBCASE("input gradient matches finite differences too") {
        std::vector<double> xx = x;
        double worst_in = 0.0;
        for (std::size_t j = 0; j < xx.size(); ++j) {
            const double orig = xx[j];
            xx[j] = orig + step;
            const double lp = bce_from_logit(forward_logit(m, xx), y);
            xx[j] = orig - step;
            const double lm = bce_from_logit(forward_logit(m, xx), y);
            xx[j] = orig;
            worst_in = std::max(worst_in, rel_err((lp - lm) / (2 * step), g.input[j]));
        }
        CHECK(worst_in < 1e-4);
    }
}

TEST_CASE("gradient edge cases") {
    const CNNModel m = CNNModel::init(tiny_arch(), 16, 9);
    std::vector<double> x(16, 1.0);

    SUBCASE("soft target equal to the output zeroes the output-node gradient") {
        const double o = forward_eval(m, x);
        const CNNGrads g = gradient(m, x, o);
        CHECK(std::abs(g.out_b[0]) < 1e-15);
        for (double v : g.input) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("zero conv weights give a zero input gradient") {
        CNNModel z = m;
        for (auto& c : z.convs) std::fill(c.w.begin(), c.w.end(), 0.0);
        const CNNGrads g = gradient(z, x, 0.0);
        for (double v : g.input) CHECK(v == 0.0);
    }
}

TEST_CASE("dropout expectation approaches the eval output in the linear regime") {
    // near-zero weights keep softplus/sigmoid effectively affine
    CNNArch arch = tiny_arch();
    CNNModel m = CNNModel::init(arch, 16, 21);
    for (auto& c : m.convs)
        for (auto& w : c.w) w *= 0.01;
    for (auto& w : m.dense_hidden.w) w *= 0.01;
    for (auto& w : m.dense_out.w) w *= 0.01;

    std::vector<double> x(16);
    Rng xr(2);
    for (auto& v : x) v = xr.normal();

    const double eval_out = forward_eval(m, x);
    Rng rng(31);
    const int draws = 20000;
    double sum = 0.0, ss = 0.0;
    for (int t = 0; t < draws; ++t) {
        const double o = forward(m, x, true, &rng, nullptr);
        sum += o;
        ss += o * o;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((ss / draws - mean * mean) / draws);
    CHECK(std::abs(mean - eval_out) <= 3.0 * std::max(sd, 1e-9));
}

TEST_CASE("training contracts") {
    const SpectraSet data = two_prototypes(16, 32, 0.05, 5);
    CNNArch arch = tiny_arch();
    arch.filters = 4;
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.batch_size = 8;
    cfg.seed = 17;
    cfg.val_fraction = 0.0;

    SUBCASE("fixed seed gives a bitwise-identical loss trace") {
        const TrainedCNN a = train_cnn(arch, data, cfg);
        const TrainedCNN b = train_cnn(arch, data, cfg);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t e = 0; e < a.trace.size(); ++e) {
            CHECK(a.trace[e].train_loss == b.trace[e].train_loss);
        }
        CHECK(a.model.dense_out.w == b.model.dense_out.w);
    }
    SUBCASE("learning rate zero leaves the weights at their initialization") {
        TrainConfig frozen = cfg;
        frozen.learning_rate = 0.0;
        frozen.epochs = 3;
        const TrainedCNN t = train_cnn(arch, data, frozen);
        const CNNModel fresh = CNNModel::init(arch, 32, mix_seed(frozen.seed, 2));
        CHECK(t.model.dense_hidden.w == fresh.dense_hidden.w);
        for (std::size_t b = 0; b < t.model.convs.size(); ++b)
            CHECK(t.model.convs[b].w == fresh.convs[b].w);
    }
    SUBCASE("a small net memorizes two prototypes") {
        TrainConfig learn = cfg;
        learn.epochs = 200;
        learn.target_train_loss = 0.04;
        const TrainedCNN t = train_cnn(arch, data, learn);
        CHECK(t.trace.back().train_loss < 0.05);
    }
    SUBCASE("median loss over early epochs does not increase on separable data") {
        const TrainedCNN t = train_cnn(arch, data, cfg);
        REQUIRE(t.trace.size() >= 20);
        std::vector<double> first, second;
        for (std::size_t e = 0; e < 10; ++e) first.push_back(t.trace[e].train_loss);
        for (std::size_t e = 10; e < 20; ++e) second.push_back(t.trace[e].train_loss);
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        CHECK(second[5] <= first[5]);
    }
    SUBCASE("single-class data is rejected") {
        const SpectraSet one = data.take_rows(data.indices_with_label(1));
        CHECK_THROWS_AS(train_cnn(arch, one, cfg), std::invalid_argument);
    }
}

TEST_CASE("early stopping triggers on a validation plateau") {
    const SpectraSet data = two_prototypes(24, 32, 0.3, 6);
    CNNArch arch = tiny_arch();
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.batch_size = 16;
    cfg.seed = 4;
    cfg.val_fraction = 0.25;
    cfg.patience = 3;
    const TrainedCNN t = train_cnn(arch, data, cfg);
    CHECK(t.stopped_early);
    CHECK(t.trace.size() < 500);
    CHECK(!std::isnan(t.trace.back().val_loss));
}
