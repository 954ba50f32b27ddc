#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "runoff/lp.hpp"

using namespace runoff::lp;
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem minimal(std::vector<double> obj) {
    LpProblem p;
    p.objective = std::move(obj);
    return p;
}
} // namespace

TEST_CASE("solve: single lower-bounded variable", "[lp]") {
    auto p = minimal({1.0});
    p.constraints.push_back({{1.0}, Relation::GreaterEq, 3.0});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == Catch::Approx(3.0));
    CHECK(s.objective_value == Catch::Approx(3.0));
}

TEST_CASE("solve: two-constraint vertex", "[lp]") {
    auto p = minimal({1.0, 1.0});
    p.constraints.push_back({{1.0, 2.0}, Relation::GreaterEq, 4.0});
    p.constraints.push_back({{3.0, 1.0}, Relation::GreaterEq, 6.0});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == Catch::Approx(1.6));
    CHECK(s.x[1] == Catch::Approx(1.2));
    CHECK(s.objective_value == Catch::Approx(2.8));
}

TEST_CASE("solve: infeasible and unbounded detection", "[lp]") {
    auto p = minimal({1.0});
    p.constraints.push_back({{1.0}, Relation::LessEq, 1.0});
    p.constraints.push_back({{1.0}, Relation::GreaterEq, 2.0});
    CHECK(solve(p).status == Status::Infeasible);

    auto q = minimal({-1.0});
    q.constraints.push_back({{1.0}, Relation::GreaterEq, 0.0});
    CHECK(solve(q).status == Status::Unbounded);
}

TEST_CASE("solve: equality constraints and free variables", "[lp]") {
    // min y  s.t.  x + y = 0,  y >= -2   (x free)  => y = -2, x = 2
    auto p = minimal({0.0, 1.0});
    p.constraints.push_back({{1.0, 1.0}, Relation::Equal, 0.0});
    p.constraints.push_back({{0.0, 1.0}, Relation::GreaterEq, -2.0});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == Catch::Approx(2.0));
    CHECK(s.x[1] == Catch::Approx(-2.0));
}

TEST_CASE("solve: bound handling (shift, mirror, two-sided)", "[lp]") {
    // min x with x in [-5, 7] => -5
    auto p = minimal({1.0});
    p.lower = {-5.0};
    p.upper = {7.0};
    CHECK(solve(p).x[0] == Catch::Approx(-5.0));
    // max x (min -x) with x in [-5, 7] => 7
    p.objective = {-1.0};
    CHECK(solve(p).x[0] == Catch::Approx(7.0));
    // upper bound only: min -x, x <= 4  => 4
    auto q = minimal({-1.0});
    q.lower = {-kInf};
    q.upper = {4.0};
    CHECK(solve(q).x[0] == Catch::Approx(4.0));
    // inconsistent bounds are infeasible
    auto r = minimal({1.0});
    r.lower = {2.0};
    r.upper = {1.0};
    CHECK(solve(r).status == Status::Infeasible);
}

TEST_CASE("solve: negative right-hand sides route through phase 1", "[lp]") {
    // min x + y  s.t.  -x - y <= -4, x,y >= 0  => objective 4
    auto p = minimal({1.0, 1.0});
    p.lower = {0.0, 0.0};
    p.upper = {kInf, kInf};
    p.constraints.push_back({{-1.0, -1.0}, Relation::LessEq, -4.0});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective_value == Catch::Approx(4.0));
}

TEST_CASE("solve: degenerate ties terminate (Bland)", "[lp]") {
    // Multiple constraints active at the optimum.
    auto p = minimal({1.0, 1.0, 1.0});
    p.lower = {0.0, 0.0, 0.0};
    p.upper = {kInf, kInf, kInf};
    p.constraints.push_back({{1.0, 1.0, 0.0}, Relation::GreaterEq, 1.0});
    p.constraints.push_back({{1.0, 0.0, 1.0}, Relation::GreaterEq, 1.0});
    p.constraints.push_back({{0.0, 1.0, 1.0}, Relation::GreaterEq, 1.0});
    p.constraints.push_back({{1.0, 1.0, 1.0}, Relation::GreaterEq, 1.5});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective_value == Catch::Approx(1.5));
}

TEST_CASE("solve: matches vertex enumeration on random LPs", "[lp]") {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto p = oracles::random_lp(seed);
        double best = 0.0;
        REQUIRE(oracles::vertex_enumeration_min(p, best)); // feasible by construction
        const auto s = solve(p);
        REQUIRE(s.status == Status::Optimal);
        CHECK(s.objective_value == Catch::Approx(best).margin(1e-6));
        ++solved;
    }
    CHECK(solved == 60);
}

TEST_CASE("solve: deterministic across repeat calls", "[lp]") {
    const auto p = oracles::random_lp(424242);
    const auto a = solve(p);
    const auto b = solve(p);
    REQUIRE(a.status == b.status);
    CHECK(a.objective_value == b.objective_value); // bitwise
    CHECK(a.x == b.x);
}

TEST_CASE("solve: rejects malformed problems", "[lp]") {
    auto p = minimal({1.0, 2.0});
    p.constraints.push_back({{1.0}, Relation::LessEq, 1.0});
    CHECK_THROWS_AS(solve(p), runoff::Error);
}
