#include <catch2/catch_amalgamated.hpp>

#include "ipw/simplex.hpp"

using namespace ipw;

namespace {

LinearConstraint row(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    return LinearConstraint{std::move(coeffs), rel, std::move(rhs)};
}

}  // namespace

TEST_CASE("simplex solves simple bounded maxima") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1, 1};
    lp.rows = {row({1, 0}, Relation::LessEq, 1), row({0, 1}, Relation::LessEq, 2)};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == Rational(3));
    CHECK(sol.point == std::vector<Rational>{1, 2});

    lp.objective = {3, 2};
    lp.rows = {row({1, 1}, Relation::LessEq, 4), row({1, 3}, Relation::LessEq, 6)};
    const auto sol2 = solve(lp);
    REQUIRE(sol2.status == LpStatus::Optimal);
    CHECK(sol2.objective_value == Rational(12));
}

TEST_CASE("simplex handles equalities and >= rows via phase one") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.maximize = true;
    lp.objective = {1, -1};
    lp.rows = {row({1, 1}, Relation::Equal, 1)};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == Rational(1));
    CHECK(sol.point == std::vector<Rational>{1, 0});

    LinearProgram lp2;
    lp2.num_vars = 1;
    lp2.maximize = false;
    lp2.objective = {1};
    lp2.rows = {row({-1}, Relation::LessEq, -2),  // x >= 2, negative rhs path
                row({1}, Relation::LessEq, 5)};
    const auto sol2 = solve(lp2);
    REQUIRE(sol2.status == LpStatus::Optimal);
    CHECK(sol2.objective_value == Rational(2));
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1};
    lp.rows = {row({1}, Relation::GreaterEq, 2), row({1}, Relation::LessEq, 1)};
    CHECK(solve(lp).status == LpStatus::Infeasible);

    LinearProgram lp2;
    lp2.num_vars = 1;
    lp2.maximize = true;
    lp2.objective = {1};
    lp2.rows = {row({1}, Relation::GreaterEq, 1)};
    CHECK(solve(lp2).status == LpStatus::Unbounded);
}

TEST_CASE("simplex terminates on Beale's degenerate example") {
    // Cycles under the naive most-negative rule; Bland's rule terminates and
    // the exact optimum is -1/20 at (1/25, 0, 1, 0).
    LinearProgram lp;
    lp.num_vars = 4;
    lp.maximize = false;
    lp.objective = {Rational(-3, 4), 150, Rational(-1, 50), 6};
    lp.rows = {
        row({Rational(1, 4), -60, Rational(-1, 25), 9}, Relation::LessEq, 0),
        row({Rational(1, 2), -90, Rational(-1, 50), 3}, Relation::LessEq, 0),
        row({0, 0, 1, 0}, Relation::LessEq, 1),
    };
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective_value == Rational(-1, 20));
    CHECK(sol.point == std::vector<Rational>{Rational(1, 25), 0, 1, 0});
}

TEST_CASE("simplex results are exact rationals") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.maximize = true;
    lp.objective = {1, 0};
    lp.rows = {row({3, 7}, Relation::Equal, 1),
               row({0, 1}, Relation::GreaterEq, Rational(1, 9))};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    // 3x + 7y = 1, y >= 1/9 -> x = (1 - 7/9)/3 = 2/27
    CHECK(sol.objective_value == Rational(2, 27));
}

TEST_CASE("simplex rejects malformed rows") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.rows = {row({1}, Relation::LessEq, 1)};
    CHECK_THROWS_AS(solve(lp), DomainError);
}
