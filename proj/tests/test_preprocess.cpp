#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ramankit/preprocess.hpp"
#include "ramankit/rng.hpp"

using namespace ramankit;

namespace {

SpectraSet from_rows(const std::vector<std::vector<double>>& rows,
                     std::vector<int> labels = {}) {
    const std::size_t p = rows[0].size();
    WavenumberAxis axis;
    for (std::size_t j = 0; j < p; ++j) axis.values.push_back(100.0 + static_cast<double>(j));
    Matrix m(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    if (labels.empty()) labels.assign(rows.size(), 1);
    return SpectraSet::create(std::move(axis), std::move(m), std::move(labels), {"a", "b"});
}

}  // namespace

TEST_CASE("fit_surface mean and sample std") {
    SUBCASE("identical rows give zero std") {
        const auto s = from_rows({{3, 4}, {3, 4}});
        const DecisionSurface surf = fit_surface(s);
        CHECK(surf.mean == std::vector<double>{3, 4});
        CHECK(surf.stddev == std::vector<double>{0, 0});
    }
    SUBCASE("ddof = 1") {
        const auto s = from_rows({{0, 0}, {2, 2}});
        const DecisionSurface surf = fit_surface(s);
        CHECK(surf.mean[0] == doctest::Approx(1.0));
        CHECK(surf.stddev[0] == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("single row errors") {
        CHECK_THROWS_AS(fit_surface(from_rows({{1, 2}})), std::invalid_argument);
    }
}

TEST_CASE("reject_outliers") {
    const auto s = from_rows({{0, 0}, {2, 2}, {1, 1}});
    const DecisionSurface surf = fit_surface(s, 3.0);

    SUBCASE("spectrum equal to the mean is kept") {
        const auto r = reject_outliers(s, surf);
        CHECK(r.rejected_indices.empty());
        CHECK(r.kept.n_rows() == 3);
    }
    SUBCASE("a point beyond k*std is rejected") {
        auto rows = std::vector<std::vector<double>>{{0, 0}, {2, 2}, {1, 1}};
        rows.push_back({1, 1 + 4.0 * surf.stddev[1]});
        const auto s2 = from_rows(rows);
        const auto r = reject_outliers(s2, surf);
        CHECK(r.rejected_indices == std::vector<std::size_t>{3});
        CHECK(r.kept.n_rows() == 3);
        CHECK(r.kept.labels().size() == 3);
    }
    SUBCASE("std = 0 keeps boundary points (all-identical data)") {
        const auto s2 = from_rows({{5, 5}, {5, 5}});
        const auto r = reject_outliers(s2, fit_surface(s2));
        CHECK(r.rejected_indices.empty());
    }
    SUBCASE("k -> infinity removes nothing, k = 0 removes non-mean rows") {
        const auto big = reject_outliers(s, fit_surface(s, 1e18));
        CHECK(big.rejected_indices.empty());
        const auto zero = reject_outliers(s, fit_surface(s, 0.0));
        // only the row equal to the mean at all points survives
        CHECK(zero.kept.n_rows() == 1);
        CHECK(zero.kept.row(0)[0] == 1.0);
    }
    SUBCASE("rejection is permutation-equivariant") {
        auto rows = std::vector<std::vector<double>>{{0, 0}, {2, 2}, {1, 1}, {9, 1}};
        const auto r1 = reject_outliers(from_rows(rows), surf);
        std::swap(rows[0], rows[3]);
        const auto r2 = reject_outliers(from_rows(rows), surf);
        CHECK(r1.rejected_indices == std::vector<std::size_t>{3});
        CHECK(r2.rejected_indices == std::vector<std::size_t>{0});
    }
    SUBCASE("dimension mismatch") {
        DecisionSurface wrong;
        wrong.mean = {0.0};
        wrong.stddev = {1.0};
        CHECK_THROWS_AS(reject_outliers(s, wrong), std::invalid_argument);
    }
}

TEST_CASE("sg_coefficients classical window-5 order-2 values") {
    const auto c = sg_coefficients({5, 2});
    REQUIRE(c.size() == 5);
    CHECK(c[0] == doctest::Approx(-3.0 / 35.0).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(12.0 / 35.0).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(17.0 / 35.0).epsilon(1e-12));
    CHECK(c[3] == doctest::Approx(12.0 / 35.0).epsilon(1e-12));
    CHECK(c[4] == doctest::Approx(-3.0 / 35.0).epsilon(1e-12));
}

TEST_CASE("sg_coefficients invariants and errors") {
    for (int window : {5, 31, 91}) {
        for (int order : {0, 2, 3}) {
            const auto c = sg_coefficients({window, order});
            const double sum = std::accumulate(c.begin(), c.end(), 0.0);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(sg_coefficients({5, 5}), std::invalid_argument);  // order >= window
    CHECK_THROWS_AS(sg_coefficients({4, 2}), std::invalid_argument);  // even window
    CHECK_THROWS_AS(sg_coefficients({5, -1}), std::invalid_argument);
}

TEST_CASE("smoothing reproduces polynomials on the interior") {
    const int n = 64;
    const SGConfig cfg{9, 3};
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        const double t = (i - n / 2.0) / 10.0;
        x[i] = 0.3 - 1.2 * t + 0.5 * t * t - 0.07 * t * t * t;
    }
    for (const auto edge : {SGEdgeMode::kMirror, SGEdgeMode::kAsymmetric}) {
        const auto y = smooth_row(x, cfg, edge);
        for (int i = cfg.window / 2; i < n - cfg.window / 2; ++i)
            CHECK(std::abs(y[i] - x[i]) < 1e-9);
    }
    // window=3, order=2 leaves a quadratic unchanged everywhere it fits
    std::vector<double> q(10);
    for (int i = 0; i < 10; ++i) q[i] = 1.0 + 2.0 * i + 3.0 * i * i;
    const auto yq = smooth_row(q, {3, 2}, SGEdgeMode::kMirror);
    for (int i = 1; i < 9; ++i) CHECK(yq[i] == doctest::Approx(q[i]).epsilon(1e-12));
}

TEST_CASE("smoothing a constant spectrum is the identity") {
    std::vector<double> c(100, 4.25);
    const auto y = smooth_row(c, {91, 3});
    for (double v : y) CHECK(v == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("smoothing is linear") {
    Rng rng(5);
    std::vector<double> x(120), y(120);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const SGConfig cfg{11, 3};
    const double alpha = 1.7, beta = -0.4;
    std::vector<double> combo(120);
    for (int i = 0; i < 120; ++i) combo[i] = alpha * x[i] + beta * y[i];
    const auto s_combo = smooth_row(combo, cfg);
    const auto sx = smooth_row(x, cfg);
    const auto sy = smooth_row(y, cfg);
    for (int i = 0; i < 120; ++i)
        CHECK(s_combo[i] == doctest::Approx(alpha * sx[i] + beta * sy[i]).epsilon(1e-9));
}

TEST_CASE("smoothing shrinks white-noise variance (Monte Carlo oracle)") {
    // 1000 noise spectra; interior output variance must drop strictly.
    Rng rng(123);
    const int n = 101, trials = 1000;
    const SGConfig cfg{21, 3};
    double var_in = 0.0, var_out = 0.0;
    long count = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.normal();
        const auto y = smooth_row(x, cfg);
        for (int i = cfg.window / 2; i < n - cfg.window / 2; ++i) {
            var_in += x[i] * x[i];
            var_out += y[i] * y[i];
            ++count;
        }
    }
    var_in /= count;
    var_out /= count;
    CHECK(var_out < var_in);
    // theoretical variance ratio is ||w||^2
    const auto w = sg_coefficients(cfg);
    const double w2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    CHECK(var_out / var_in == doctest::Approx(w2).epsilon(0.1));
}

TEST_CASE("smooth() validates window vs length and preserves shape") {
    const auto s = from_rows({{1, 2, 3}, {4, 5, 6}});
    CHECK_THROWS_AS(smooth(s, {5, 2}), std::invalid_argument);
    const auto sm = smooth(s, {3, 1});
    CHECK(sm.n_rows() == 2);
    CHECK(sm.n_cols() == 3);
    CHECK(sm.labels() == s.labels());
}
