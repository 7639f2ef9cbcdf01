#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ramankit/spectra.hpp"
#include "ramankit/synth.hpp"

using namespace ramankit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ramankit_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

SpectraSet tiny_set(int label, double offset = 0.0) {
    Matrix m(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = offset + static_cast<double>(i + j);
    return SpectraSet::create({{100.0, 200.0, 300.0}}, std::move(m),
                              {label, label}, {"a", "b"});
}

}  // namespace

TEST_CASE("load_spectra parses header axis and rows") {
    const auto p = temp_file("ok.csv");
    write_file(p, "100,200,300\n1,2,3\n4,5,6\n");
    const SpectraSet s = load_spectra(p, 1);
    CHECK(s.n_rows() == 2);
    CHECK(s.n_cols() == 3);
    CHECK(s.labels() == std::vector<int>{1, 1});
    CHECK(s.row(1)[2] == 6.0);
    CHECK(s.sample_names()[0] == "ok");
}

TEST_CASE("load_spectra error paths") {
    const auto ragged = temp_file("ragged.csv");
    write_file(ragged, "100,200,300\n1,2\n");
    CHECK_THROWS_WITH_AS(load_spectra(ragged, 0),
                         doctest::Contains("row 2"), std::runtime_error);

    const auto nonincr = temp_file("nonincr.csv");
    write_file(nonincr, "100,100,200\n1,2,3\n");
    CHECK_THROWS_WITH_AS(load_spectra(nonincr, 0),
                         doctest::Contains("not strictly increasing"), std::runtime_error);

    const auto junk = temp_file("junk.csv");
    write_file(junk, "100,200\n1,zap\n");
    CHECK_THROWS_WITH_AS(load_spectra(junk, 0), doctest::Contains("column 2"),
                         std::runtime_error);

    const auto inf = temp_file("inf.csv");
    write_file(inf, "100,200\n1,inf\n");
    CHECK_THROWS_AS(load_spectra(inf, 0), std::runtime_error);

    CHECK_THROWS(load_spectra(temp_file("missing_file.csv"), 0));
}

TEST_CASE("save then load round-trips bit-identically") {
    const SynthPreset p = preset("colon_like");
    const SpectraSet s =
        generate(p.first, p.second, 3, reference_axis(), 99, p.sample_names);
    const SpectraSet first = s.take_rows(s.indices_with_label(1));
    const auto path = temp_file("roundtrip.csv");
    save_spectra(first, path);
    const SpectraSet back = load_spectra(path, 1);
    CHECK(back.axis().values == first.axis().values);
    CHECK(back.matrix().data == first.matrix().data);
}

TEST_CASE("merge stacks rows and checks labels/axes") {
    const SpectraSet a = tiny_set(1);
    const SpectraSet b = tiny_set(0, 10.0);
    const SpectraSet m = merge(a, b);
    CHECK(m.n_rows() == 4);
    CHECK(m.labels() == std::vector<int>{1, 1, 0, 0});
    CHECK(m.row(2)[0] == 10.0);

    SUBCASE("axis mismatch") {
        Matrix mm(1, 3);
        const SpectraSet c =
            SpectraSet::create({{100.0, 200.0, 301.0}}, std::move(mm), {0}, {"", ""});
        CHECK_THROWS_WITH_AS(merge(a, c), doctest::Contains("axes differ"), std::runtime_error);
    }
    SUBCASE("wrong label placement") { CHECK_THROWS(merge(b, a)); }

    SUBCASE("splitting by label recovers the inputs row-for-row") {
        const SpectraSet ra = m.take_rows(m.indices_with_label(1));
        const SpectraSet rb = m.take_rows(m.indices_with_label(0));
        CHECK(ra.matrix().data == a.matrix().data);
        CHECK(rb.matrix().data == b.matrix().data);
    }
}

TEST_CASE("extract_region keeps the documented point counts") {
    const WavenumberAxis axis = reference_axis();
    Matrix m(1, axis.size());
    for (std::size_t j = 0; j < axis.size(); ++j) m.at(0, j) = static_cast<double>(j);
    const SpectraSet s = SpectraSet::create(axis, std::move(m), {1}, {"x", "y"});

    const SpectraSet lw = extract_region(s, lw_region());
    CHECK(lw.n_cols() == 221);
    const SpectraSet hw = extract_region(s, hw_region());
    CHECK(hw.n_cols() == 570);

    SUBCASE("column order and labels preserved") {
        CHECK(lw.row(0)[0] == 0.0);
        CHECK(lw.row(0)[220] == 220.0);
        CHECK(hw.row(0)[0] == 221.0);
        CHECK(lw.labels() == s.labels());
    }
    SUBCASE("idempotent") {
        const SpectraSet lw2 = extract_region(lw, lw_region());
        CHECK(lw2.matrix().data == lw.matrix().data);
        CHECK(lw2.axis().values == lw.axis().values);
    }
    SUBCASE("disjoint region errors") {
        CHECK_THROWS_WITH_AS(extract_region(s, RegionSpec{"none", 10.0, 20.0}),
                             doctest::Contains("selects no wavenumbers"), std::runtime_error);
    }
}

TEST_CASE("SpectraSet::create validates invariants") {
    Matrix bad_label(1, 2);
    CHECK_THROWS(SpectraSet::create({{1.0, 2.0}}, std::move(bad_label), {2}, {"", ""}));

    Matrix nan_val(1, 2);
    nan_val.at(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(SpectraSet::create({{1.0, 2.0}}, std::move(nan_val), {1}, {"", ""}),
                         doctest::Contains("non-finite"), std::runtime_error);

    Matrix short_axis(1, 1);
    CHECK_THROWS(SpectraSet::create({{1.0}}, std::move(short_axis), {1}, {"", ""}));
}
