#pragma once

#include <optional>
#include <span>
#include <vector>

namespace netdef::lp {

inline constexpr double kFeasibilityTolerance = 1e-7;

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// Minimize objective subject to constraints and per-variable bounds.
// An empty objective asks for any feasible point. Absent bound vectors mean
// every variable is in [0, +inf); a nullopt entry means "no bound" on that
// side.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  std::vector<std::optional<double>> lower_bounds;
  std::vector<std::optional<double>> upper_bounds;

  // Appends a variable with the given bounds and returns its index.
  int add_variable(std::optional<double> lower = 0.0,
                   std::optional<double> upper = std::nullopt);
  void add_constraint(std::vector<Term> terms, Relation relation, double rhs);

  std::optional<double> lower(int var) const;
  std::optional<double> upper(int var) const;
};

enum class LpStatus { kFeasible, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;    // filled when feasible
  double objective_value = 0.0;  // 0 for pure feasibility problems
};

// Two-phase dense-tableau simplex with Bland's rule. Deterministic.
// Throws InvalidParams for malformed programs and NumericalFailure when the
// point it ends on does not satisfy the program within
// kFeasibilityTolerance.
LpSolution solve_lp(const LinearProgram& lp);

// Largest violation over constraints and bounds, clamped at zero. Independent
// of the solver.
double check_solution(const LinearProgram& lp, std::span<const double> values);

}  // namespace netdef::lp
