#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "runoff/triangle.hpp"

using namespace runoff;

TEST_CASE("parse_triangle: Taylor-Ashe fixture (wide layout)", "[triangle]") {
    const auto text = oracles::read_file(RUNOFF_FIXTURE_CSV);
    REQUIRE_FALSE(text.empty());
    const auto t = parse_triangle(text);
    CHECK(t.k() == 10);
    CHECK(t.cells().size() == 55);
    CHECK(t.amount(1, 1) == Catch::Approx(357848.0));
    CHECK(t.amount(2, 1) == Catch::Approx(352118.0));
    CHECK(t.amount(1, 10) == Catch::Approx(67948.0));
    CHECK(t.amount(10, 1) == Catch::Approx(344014.0));
}

TEST_CASE("fixture checksum is pinned", "[triangle]") {
    // FNV-1a over the shipped file; guards against silent fixture edits.
    CHECK(oracles::fnv1a_file(RUNOFF_FIXTURE_CSV) == 0x96d471a12ec6f3b2ULL);
}

TEST_CASE("parse_triangle: long layout with header", "[triangle]") {
    const auto t = parse_triangle("i,j,amount\n1,1,100\n1,2,50\n2,1,200\n");
    CHECK(t.k() == 2);
    CHECK(t.amount(1, 2) == Catch::Approx(50.0));
    // order-independent
    const auto t2 = parse_triangle("i,j,amount\n2,1,200\n1,2,50\n1,1,100\n");
    CHECK(t2.cells() == t.cells());
}

TEST_CASE("parse_triangle: smallest triangle and blank-padded wide rows", "[triangle]") {
    CHECK(parse_triangle("5.0\n").k() == 1);
    const auto t = parse_triangle("100,50\n200,\n"); // square layout, blank lower-right
    CHECK(t.k() == 2);
    CHECK(t.amount(2, 1) == Catch::Approx(200.0));
}

TEST_CASE("parse_triangle: validation errors", "[triangle]") {
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n1,1,100\n1,2,50\n2,1,200\n2,2,70\n"),
                    RaggedLayout); // cell outside the observed half
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n1,1,100\n2,1,200\n"), MissingCell);
    CHECK_THROWS_AS(parse_triangle(
                        "i,j,amount\n1,1,1\n1,2,1\n1,3,1\n2,1,1\n3,1,1\n"), // (2,2) absent, k=3
                    MissingCell);
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n1,1,100\n1,1,100\n"), DuplicateCell);
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n1,1,0\n1,2,50\n2,1,200\n"), NonPositiveAmount);
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n1,1,-3\n1,2,50\n2,1,200\n"), NonPositiveAmount);
    CHECK_THROWS_AS(parse_triangle("100,50\n200,300\n"), RaggedLayout); // row 2 too long
    CHECK_THROWS_AS(parse_triangle("100,xyz\n200\n"), RaggedLayout);
    CHECK_THROWS_AS(parse_triangle(""), RaggedLayout);
    CHECK_THROWS_AS(parse_triangle("\n  \n"), RaggedLayout);
    CHECK_THROWS_AS(parse_triangle("i,j,amount\n"), RaggedLayout); // header only
}

TEST_CASE("observed_cells / future_cells enumeration", "[triangle]") {
    CHECK(observed_cells(2) == CellSet{{1, 1}, {1, 2}, {2, 1}});
    CHECK(future_cells(2) == CellSet{{2, 2}});
    CHECK(observed_cells(1) == CellSet{{1, 1}});
    CHECK(future_cells(1).empty());
    CHECK(observed_cells(10).size() == 55);
    CHECK(future_cells(10).size() == 45);
}

TEST_CASE("observed and future cells partition the square", "[triangle]") {
    for (int k = 1; k <= 8; ++k) {
        const auto obs = observed_cells(k);
        const auto fut = future_cells(k);
        CHECK(obs.size() + fut.size() == static_cast<std::size_t>(k) * k);
        CHECK(std::is_sorted(obs.begin(), obs.end()));
        CHECK(std::is_sorted(fut.begin(), fut.end()));
        for (const auto& cell : obs) CHECK(cell.i + cell.j <= k + 1);
        for (const auto& cell : fut) CHECK(cell.i + cell.j >= k + 2);
    }
}

TEST_CASE("serialize/parse round-trip", "[triangle]") {
    const auto original = parse_triangle(oracles::read_file(RUNOFF_FIXTURE_CSV));
    const auto round = parse_triangle(serialize_triangle(original));
    CHECK(round.k() == original.k());
    CHECK(round.cells() == original.cells());

    const auto fractional = oracles::random_triangle(5, 99);
    const auto round2 = parse_triangle(serialize_triangle(fractional));
    CHECK(round2.cells() == fractional.cells());
}

TEST_CASE("from_cells validates directly constructed triangles", "[triangle]") {
    std::map<Cell, double> cells{{{1, 1}, 1.0}, {{1, 2}, 2.0}, {{2, 1}, 3.0}};
    CHECK(RunOffTriangle::from_cells(2, cells).k() == 2);
    cells[{2, 2}] = 4.0;
    CHECK_THROWS_AS(RunOffTriangle::from_cells(2, cells), RaggedLayout);
    CHECK_THROWS_AS(RunOffTriangle::from_cells(0, {}), RaggedLayout);
}
