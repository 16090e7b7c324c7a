#include "support.hpp"

#include "pltk/family.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>
#include <stdexcept>

using namespace pltk;
using namespace pltk::test;

TEST_CASE("fixed-delta cells") {
    const auto fc = square_complex();
    FamilyOptions opts;
    opts.stat = Stat::betti;
    const auto g = family_fixed_delta(fc, 1, {0, 1, 2}, 1.0, opts);
    REQUIRE(g.cells.size() == 3);
    CHECK(g.cells[2].a == 2.0);
    CHECK(g.cells[2].b == 3.0);
    CHECK(g.cells[2].i == 2);
    CHECK(g.cells[2].j == 2);
    CHECK(*g.cells[1].value == 0.0);
    CHECK(*g.cells[2].value == 1.0);

    CHECK_THROWS_AS(family_fixed_delta(fc, 1, {0, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(family_fixed_delta(fc, 1, {1, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(family_fixed_delta(fc, 1, {}, 1.0), std::invalid_argument);
}

TEST_CASE("consecutive cells use every filtration value") {
    const auto fc = filled_triangle();
    const auto g = family_consecutive(fc, 1);
    CHECK(g.labels == std::vector<double>{0, 0.1, 0.2, 1.4});
    REQUIRE(g.cells.size() == 3);
    CHECK(g.cells[0].a == 0.0);
    CHECK(g.cells[0].b == 0.1);
    CHECK(g.cells[0].spectrum->eigenvalues.empty());
    CHECK(max_abs_diff(g.cells[2].spectrum->eigenvalues, {3, 3, 3}) <= 1e-12);

    const FilteredComplex flat({}, {{0, 0}});
    CHECK_THROWS_AS(family_consecutive(flat, 0), std::invalid_argument);
}

TEST_CASE("diagonal and all-pairs grids") {
    const auto fc = square_complex();
    const std::vector<double> grid{0, 1, 2, 3};
    const auto d = family_diagonal(fc, 0, grid);
    REQUIRE(d.cells.size() == 4);
    for (const auto& c : d.cells) CHECK(c.a == c.b);

    FamilyOptions opts;
    opts.stat = Stat::betti;
    const auto g = all_pairs_grid(fc, 1, grid, opts);
    REQUIRE(g.cells.size() == 10);
    CHECK(g.cells[0].i == 0);
    CHECK(g.cells[0].j == 0);
    CHECK(g.cells[1].j == 1);
    CHECK(g.cells[4].i == 1);
    CHECK(g.cells[4].j == 1);
    for (const auto& c : g.cells) {
        REQUIRE(c.value);
        CHECK(static_cast<Index>(*c.value) == persistent_betti_rank_oracle(fc, 1, c.a, c.b));
    }
}

TEST_CASE("undefined statistics leave cells missing") {
    const auto fc = square_complex();
    FamilyOptions opts;
    opts.stat = Stat::max;
    const auto g = family_diagonal(fc, 2, {2, 3}, opts);
    CHECK(g.cells[0].is_missing());
    CHECK(!g.cells[0].value);
    CHECK(!g.cells[1].is_missing());
    CHECK(*g.cells[1].value == doctest::Approx(3.0));

    std::ostringstream csv;
    write_grid_csv(csv, g);
    CHECK(csv.str() == "a,b,value\n3,3,3\n");

    const auto doc = nlohmann::json::parse(grid_to_json(g));
    CHECK(doc["mode"] == "diagonal");
    CHECK(doc["stat"] == "max");
    CHECK(doc["cells"][0]["value"].is_null());
    CHECK(doc["cells"][0]["missing"].is_string());
    CHECK(doc["cells"][1]["missing"].is_null());
}

TEST_CASE("Betti pre-screen skips cells") {
    const auto fc = square_complex();
    FamilyOptions opts;
    opts.stat = Stat::betti;
    opts.max_betti = 1;
    const auto g = family_diagonal(fc, 1, {1, 2, 3}, opts);
    CHECK(!g.cells[0].is_missing());
    CHECK(g.cells[1].is_missing());
    CHECK(!g.cells[1].spectrum);
    CHECK(!g.cells[2].is_missing());
}

TEST_CASE("spectra CSV lists every eigenvalue") {
    const auto g = family_diagonal(filled_triangle(), 1, {0.1});
    std::ostringstream csv;
    write_spectra_csv(csv, g);
    CHECK(csv.str() == "dim,a,b,index,eigenvalue\n1,0.1,0.1,0,2\n");
}

TEST_CASE("parallel evaluation is deterministic") {
    const auto sample = rips_corpus(8).back();
    FamilyOptions serial;
    serial.stat = Stat::min_nonzero;
    FamilyOptions parallel = serial;
    parallel.jobs = 4;
    const auto grid = sample.complex.filtration_grid();
    const std::vector<double> labels(grid.begin(), grid.begin() + std::min<std::size_t>(grid.size(), 12));
    const auto x = all_pairs_grid(sample.complex, 1, labels, serial);
    const auto y = all_pairs_grid(sample.complex, 1, labels, parallel);
    CHECK(grid_to_json(x) == grid_to_json(y));
    FamilyOptions all = serial;
    all.jobs = 0;
    CHECK(grid_to_json(all_pairs_grid(sample.complex, 1, labels, all)) == grid_to_json(x));
}

TEST_CASE("bad dimension fails before any cell") {
    CHECK_THROWS_AS(family_diagonal(square_complex(), 4, {0}), std::out_of_range);
}
