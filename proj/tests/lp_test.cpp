#include <doctest.h>

#include <random>

#include "netdef/errors.hpp"
#include "netdef/instances.hpp"
#include "netdef/lp.hpp"
#include "netdef/solvers.hpp"
#include "oracles.hpp"

using namespace netdef;
using namespace netdef::lp;

TEST_CASE("minimize x + y subject to x + y >= 1") {
  LinearProgram program;
  const int x = program.add_variable();
  const int y = program.add_variable();
  program.objective = {{x, 1.0}, {y, 1.0}};
  program.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kGreaterEqual, 1.0);
  const auto sol = solve_lp(program);
  REQUIRE(sol.status == LpStatus::kFeasible);
  CHECK(sol.objective_value == doctest::Approx(1.0));
  CHECK(check_solution(program, sol.values) <= kFeasibilityTolerance);
}

TEST_CASE("contradictory bounds are infeasible") {
  LinearProgram program;
  const int x = program.add_variable();
  program.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 2.0);
  program.add_constraint({{x, 1.0}}, Relation::kLessEqual, 1.0);
  CHECK(solve_lp(program).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded objective") {
  LinearProgram program;
  const int x = program.add_variable();
  program.objective = {{x, -1.0}};
  program.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 1.0);
  CHECK(solve_lp(program).status == LpStatus::kUnbounded);
}

TEST_CASE("equality rows, free and shifted variables") {
  LinearProgram program;
  const int a = program.add_variable(std::nullopt, std::nullopt);  // free
  const int b = program.add_variable(-2.0, 3.0);
  const int c = program.add_variable(std::nullopt, 4.0);
  program.objective = {{a, 1.0}, {b, 1.0}, {c, -1.0}};
  program.add_constraint({{a, 1.0}, {b, -1.0}}, Relation::kEqual, -1.0);
  program.add_constraint({{a, 1.0}}, Relation::kGreaterEqual, -5.0);
  const auto sol = solve_lp(program);
  REQUIRE(sol.status == LpStatus::kFeasible);
  // b = a + 1 with a >= -5 and b >= -2: best is a = -3, b = -2, c = 4.
  CHECK(sol.values[a] == doctest::Approx(-3.0));
  CHECK(sol.values[b] == doctest::Approx(-2.0));
  CHECK(sol.values[c] == doctest::Approx(4.0));
  CHECK(sol.objective_value == doctest::Approx(-9.0));
}

TEST_CASE("redundant equalities survive phase one") {
  LinearProgram program;
  const int x = program.add_variable();
  const int y = program.add_variable();
  program.objective = {{x, 1.0}, {y, 2.0}};
  program.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kEqual, 2.0);
  program.add_constraint({{x, 2.0}, {y, 2.0}}, Relation::kEqual, 4.0);
  const auto sol = solve_lp(program);
  REQUIRE(sol.status == LpStatus::kFeasible);
  CHECK(sol.objective_value == doctest::Approx(2.0));
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram program;
  program.num_vars = 1;
  program.add_constraint({{3, 1.0}}, Relation::kLessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(program), InvalidParams);
}

TEST_CASE("check_solution") {
  LinearProgram program;
  const int x = program.add_variable();
  program.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 1.0);
  CHECK(check_solution(program, std::vector<double>{0.0}) == 1.0);
  CHECK(check_solution(program, std::vector<double>{1.5}) == 0.0);
  CHECK(check_solution(program, std::vector<double>{-0.5}) == 1.5);
}

TEST_CASE("relaxation of the integrality-gap instance") {
  const auto net = instances::gen_integrality_gap();
  const auto relax = build_relaxation_lp(net, 0.0, 0.5);
  const auto sol = solve_lp(relax.program);
  REQUIRE(sol.status == LpStatus::kFeasible);
  CHECK(check_solution(relax.program, sol.values) <= kFeasibilityTolerance);

  // The hand-built fractional point y_u = y_v = r_u = 0.5, r_v = 0.
  std::vector<double> point(relax.program.num_vars, 0.0);
  point[relax.resource_var[0]] = 0.5;
  point[relax.indicator_var[0]] = 0.5;
  point[relax.indicator_var[1]] = 0.5;
  CHECK(check_solution(relax.program, point) == 0.0);
}

TEST_CASE("random programs agree with vertex enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> rhs(-4, 6);
  std::uniform_int_distribution<int> rel(0, 2);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + trial % 4;
    const int m = 1 + (trial / 4) % 5;
    LinearProgram program;
    for (int j = 0; j < n; ++j) {
      // Boxed so every feasible region is a polytope.
      program.add_variable(0.0, 5.0);
      program.objective.push_back({j, static_cast<double>(coef(rng))});
    }
    for (int i = 0; i < m; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j) terms.push_back({j, double(coef(rng))});
      const int r = rel(rng);
      // Equalities are rare in practice; keep them at one in nine.
      const Relation relation = r == 0 ? Relation::kLessEqual
                                : r == 1 ? Relation::kGreaterEqual
                                : (trial % 3 == 0 ? Relation::kEqual
                                                  : Relation::kLessEqual);
      program.add_constraint(std::move(terms), relation, rhs(rng));
    }
    const auto sol = solve_lp(program);
    const auto oracle = testing::vertex_enumeration_min(program);
    CAPTURE(trial);
    CHECK((sol.status == LpStatus::kFeasible) == oracle.feasible);
    if (sol.status == LpStatus::kFeasible && oracle.feasible) {
      ++feasible;
      CHECK(check_solution(program, sol.values) <= kFeasibilityTolerance);
      CHECK(sol.objective_value ==
            doctest::Approx(oracle.objective).epsilon(1e-6));
    }
    // Deterministic: a second solve is bit-identical.
    const auto again = solve_lp(program);
    CHECK(again.status == sol.status);
    CHECK(again.values == sol.values);
  }
  CHECK(feasible > 100);
}

TEST_CASE("degenerate feasibility programs stay accurate") {
  // A relaxation whose all-zero start is already feasible; choosing pivots
  // by index alone once drove this tableau into a spurious 1.5 violation.
  instances::RandomParams params;
  params.seed = 20221;
  params.n = 6;
  params.m = 10;
  const auto net = instances::gen_random(params);
  for (double alpha : result_space(net)) {
    for (double budget : {net.resource / 4, net.resource / 2, 0.0}) {
      const auto relax = build_relaxation_lp(net, alpha, budget);
      const auto sol = solve_lp(relax.program);
      CAPTURE(alpha);
      CAPTURE(budget);
      if (sol.status == LpStatus::kFeasible) {
        CHECK(check_solution(relax.program, sol.values) <= kFeasibilityTolerance);
      }
    }
  }

  // Homogeneous rows: zero is feasible and must be found as such.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram program;
    const int n = 3 + trial % 8;
    for (int j = 0; j < n; ++j) program.add_variable(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j) {
        terms.push_back({j, i == j ? -coef(rng) : coef(rng) * (rng() % 2)});
      }
      program.add_constraint(std::move(terms), Relation::kGreaterEqual, 0.0);
    }
    const auto sol = solve_lp(program);
    REQUIRE(sol.status == LpStatus::kFeasible);
    CHECK(check_solution(program, sol.values) <= kFeasibilityTolerance);
  }
}
