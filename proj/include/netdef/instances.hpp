#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netdef/model.hpp"

namespace netdef::instances {

struct Literal {
  int var;  // 0-based
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

// Disjunction of conjunctive clauses over variables 0..num_vars-1.
struct DnfFormula {
  int num_vars = 0;
  std::vector<std::vector<Literal>> clauses;

  bool operator==(const DnfFormula&) const = default;
};

// Throws InvalidParams on out-of-range variables, empty clauses, repeated
// literals, or a clause holding both a variable and its negation.
void check_formula(const DnfFormula& f);

// Two nodes u, v joined by a weight-1 edge with R = 1. Optimal result is 0
// at R = 1 and 1 at any R < 1, yet the relaxation is feasible at R = 0.5.
DefenseNetwork gen_integrality_gap();

enum class GreedyHardKind { kIsolated, kSingleThreshold };

// Path u1 - u2 - u3 with R = 3 and g = g' = (10, 2, 10) * value_scale.
// Isolated: w = 0, lb = 1, ub = 2. Single threshold: w = 1, lb = ub = 3.
// Both have optimum 0 while greedy ends at 10 * value_scale.
DefenseNetwork gen_greedy_hard(GreedyHardKind kind, double value_scale = 1.0);

// MAX-DNF reduction. Result 0 is achievable iff some assignment satisfies
// at least t clauses. Node ids: "x<i>" and "~x<i>" for the literals of
// variable i (1-based), "C<j>" for clause j, "C<j>:<literal>" for
// connectors. Throws InvalidParams unless 1 <= t <= q.
DefenseNetwork gen_dnf_reduction(const DnfFormula& f, int t);

// Exhaustive over 2^p assignments. Throws SizeLimit for p > 24.
int dnf_max_sat(const DnfFormula& f);

struct Range {
  double lo;
  double hi;
};

struct RandomParams {
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  Range weight{0.0, 1.0};
  Range lb{0.0, 2.0};
  Range spread{0.0, 2.0};  // ub - lb
  Range value{0.0, 10.0};  // g; g' is drawn from [0, g]
  // Drawn from [0, sum of lb] when absent.
  std::optional<double> resource;
  bool isolated = false;          // force w = 0
  bool single_threshold = false;  // force ub = lb
};

// Connected random instance: a random spanning tree plus distinct extra
// edges. Identical parameters give identical instances. Throws
// InvalidParams unless n >= 1 and n - 1 <= m <= n (n - 1) / 2.
DefenseNetwork gen_random(const RandomParams& params);

}  // namespace netdef::instances
