#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ramankit/explain.hpp"
#include "ramankit/rng.hpp"

using namespace ramankit;

namespace {

// Two well-separated classes on feature 0, pure noise on feature 1.
struct Problem {
    Matrix features;
    std::vector<int> labels;
};

Problem separable_problem(std::size_t n, std::uint64_t seed) {
    Problem pr{Matrix(n, 2), std::vector<int>(n, 0)};
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        pr.labels[i] = i % 2;
        pr.features.at(i, 0) = (pr.labels[i] ? 2.0 : -2.0) + 0.2 * rng.normal();
        pr.features.at(i, 1) = rng.normal();
    }
    return pr;
}

}  // namespace

TEST_CASE("permutation importance") {
    const Problem pr = separable_problem(200, 8);
    const LogisticFit fit = fit_logistic(pr.features, pr.labels, 1.0);
    const ImportanceReport rep = permutation_importance(fit.model, pr.features, pr.labels,
                                                        {"f0", "f1"}, 30, 99);
    REQUIRE(rep.features.size() == 2);
    CHECK(rep.baseline_auc > 0.99);

    SUBCASE("a perfectly separating feature loses about half the AUC") {
        CHECK(rep.features[0].importance ==
              doctest::Approx(0.5).epsilon(0.15));  // 1.0 -> ~0.5
    }
    SUBCASE("the noise feature matters less than the signal feature") {
        CHECK(rep.features[1].importance < rep.features[0].importance);
        CHECK(std::abs(rep.features[1].importance) < 0.1);
    }
    SUBCASE("a zero-coefficient feature has exactly zero importance") {
        LogisticModel m = fit.model;
        m.beta[1] = 0.0;
        const ImportanceReport r2 =
            permutation_importance(m, pr.features, pr.labels, {"f0", "f1"}, 5, 1);
        CHECK(r2.features[1].importance == 0.0);
        CHECK(r2.features[1].half_width == 0.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(permutation_importance(fit.model, Matrix(3, 0), {1, 0, 1}, {}, 30, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            permutation_importance(fit.model, pr.features, pr.labels, {"f0", "f1"}, 1, 0),
            std::invalid_argument);
    }
}

TEST_CASE("importance of a feature is stable under relabeling of others") {
    const Problem pr = separable_problem(300, 12);
    const LogisticFit fit = fit_logistic(pr.features, pr.labels, 1.0);
    const auto rep1 = permutation_importance(fit.model, pr.features, pr.labels,
                                             {"f0", "f1"}, 30, 5);

    // scramble feature 1 beforehand; feature 0's importance should not move
    // beyond permutation noise
    Matrix scrambled = pr.features;
    Rng rng(77);
    std::vector<double> col(pr.features.rows);
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = scrambled.at(i, 1);
    rng.shuffle(col);
    for (std::size_t i = 0; i < col.size(); ++i) scrambled.at(i, 1) = col[i];
    const auto rep2 =
        permutation_importance(fit.model, scrambled, pr.labels, {"f0", "f1"}, 30, 5);
    CHECK(std::abs(rep1.features[0].importance - rep2.features[0].importance) <
          3.0 * (rep1.features[0].half_width + rep2.features[0].half_width + 1e-3));
}

TEST_CASE("ecdf_values midrank convention") {
    SUBCASE("distinct values map to (1..M)/M") {
        const auto e = ecdf_values({10.0, 30.0, 20.0});
        CHECK(e[0] == doctest::Approx(1.0 / 3.0));
        CHECK(e[1] == doctest::Approx(3.0 / 3.0));
        CHECK(e[2] == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("a single atom maps everything to the same midrank") {
        const auto e = ecdf_values({5.0, 5.0, 5.0, 5.0});
        for (double v : e) CHECK(v == doctest::Approx(2.5 / 4.0));
    }
    SUBCASE("sorted ECDF values equal (1..M)/M up to ties") {
        Rng rng(3);
        std::vector<double> v(50);
        for (auto& x : v) x = std::round(rng.normal() * 2) / 2.0;
        auto e = ecdf_values(v);
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double grid = static_cast<double>(i + 1) / 50.0;
            CHECK(std::abs(e[i] - grid) < 0.5);  // ties only average neighbours
        }
        CHECK(e.back() <= 1.0);
        CHECK(e.front() > 0.0);
    }
}

TEST_CASE("saliency_map") {
    CNNArch arch;
    arch.blocks = 1;
    arch.filters = 2;
    const std::size_t p = 24;
    WavenumberAxis axis;
    for (std::size_t j = 0; j < p; ++j) axis.values.push_back(static_cast<double>(j + 1));
    Rng rng(5);
    Matrix m(6, p);
    for (auto& v : m.data) v = rng.normal();
    std::vector<int> labels = {1, 1, 1, 0, 0, 0};
    const SpectraSet test = SpectraSet::create(axis, std::move(m), std::move(labels), {"a", "b"});
    const CNNModel model = CNNModel::init(arch, p, 11);

    const SaliencyMap map = saliency_map(model, test);
    REQUIRE(map.mean.size() == p);
    REQUIRE(map.wavenumbers.size() == p);
    for (double v : map.mean) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (double v : map.half_width) CHECK(v >= 0.0);

    SUBCASE("constant-output model gives a flat map (single ECDF atom)") {
        CNNModel zero = model;
        for (auto& c : zero.convs) std::fill(c.w.begin(), c.w.end(), 0.0);
        const SaliencyMap flat = saliency_map(zero, test);
        for (std::size_t j = 0; j < p; ++j) {
            CHECK(flat.mean[j] == doctest::Approx(flat.mean[0]));
            CHECK(flat.half_width[j] == doctest::Approx(0.0));
        }
    }
    SUBCASE("per-wavenumber scope also stays within [0,1]") {
        const SaliencyMap per = saliency_map(model, test, ECDFScope::kPerWavenumber);
        for (double v : per.mean) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    SUBCASE("empty test set errors") {
        CHECK_THROWS_AS(saliency_map(model, test.take_rows({}), ECDFScope::kPooled),
                        std::invalid_argument);
    }
}
