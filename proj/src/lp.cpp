#include "netdef/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <fmt/core.h>

#include "netdef/errors.hpp"

namespace netdef::lp {

int LinearProgram::add_variable(std::optional<double> lower,
                                std::optional<double> upper) {
  // Materialize the bound vectors lazily so hand-built programs can leave
  // them empty.
  lower_bounds.resize(num_vars, 0.0);
  upper_bounds.resize(num_vars, std::nullopt);
  lower_bounds.push_back(lower);
  upper_bounds.push_back(upper);
  return num_vars++;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                   double rhs) {
  constraints.push_back({std::move(terms), relation, rhs});
}

std::optional<double> LinearProgram::lower(int var) const {
  if (lower_bounds.empty()) return 0.0;
  return lower_bounds[var];
}

std::optional<double> LinearProgram::upper(int var) const {
  if (upper_bounds.empty()) return std::nullopt;
  return upper_bounds[var];
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kFeasible:
      return "feasible";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kPivotEpsilon = 1e-9;
constexpr double kCostEpsilon = 1e-9;
// Consecutive degenerate pivots tolerated before Bland's rule takes over.
constexpr int kDegenerateRunLimit = 50;

void check_well_formed(const LinearProgram& lp) {
  if (lp.num_vars < 0) throw InvalidParams("negative variable count");
  if ((!lp.lower_bounds.empty() &&
       lp.lower_bounds.size() != static_cast<std::size_t>(lp.num_vars)) ||
      (!lp.upper_bounds.empty() &&
       lp.upper_bounds.size() != static_cast<std::size_t>(lp.num_vars))) {
    throw InvalidParams("bound vectors do not match num_vars");
  }
  auto check_terms = [&](const std::vector<Term>& terms) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= lp.num_vars) {
        throw InvalidParams(fmt::format("variable index {} out of range", t.var));
      }
      if (!std::isfinite(t.coef)) throw InvalidParams("non-finite coefficient");
    }
  };
  check_terms(lp.objective);
  for (const auto& c : lp.constraints) {
    check_terms(c.terms);
    if (!std::isfinite(c.rhs)) throw InvalidParams("non-finite right-hand side");
  }
}

// Original variable x = offset + sum(sign * column).
struct VarMap {
  double offset = 0.0;
  int plus = -1;   // column with coefficient +1
  int minus = -1;  // column with coefficient -1
};

struct Row {
  std::vector<std::pair<int, double>> terms;  // structural columns
  Relation relation;
  double rhs;
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), width_(cols + 1),
        data_(static_cast<std::size_t>(rows) * width_, 0.0),
        cost_(width_, 0.0), basis_(rows, -1) {}

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * width_ + c]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * width_ + c];
  }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  double& cost(int c) { return cost_[c]; }
  double& cost_rhs() { return cost_[cols_]; }
  int& basis(int r) { return basis_[r]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    double* prow = &data_[static_cast<std::size_t>(pr) * width_];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      eliminate(&data_[static_cast<std::size_t>(r) * width_], prow, pc);
    }
    eliminate(cost_.data(), prow, pc);
    basis_[pr] = pc;
  }

  // Minimizes over columns allowed[c]; returns false when the objective is
  // unbounded below. Prices with Dantzig's rule (most negative reduced cost)
  // and, on ties in the ratio test, takes the largest pivot element. After a
  // run of degenerate pivots it switches to Bland's rule until the objective
  // moves again, which rules out cycling. With stop_at_zero the loop also
  // ends once the objective value reaches zero (phase 1 is then done).
  bool optimize(const std::vector<char>& allowed, bool stop_at_zero,
                double zero_tol) {
    int degenerate_run = 0;
    for (;;) {
      if (stop_at_zero && -cost_[cols_] <= zero_tol) return true;
      const bool bland = degenerate_run >= kDegenerateRunLimit;
      int enter = -1;
      for (int c = 0; c < cols_; ++c) {
        if (!allowed[c] || cost_[c] >= -kCostEpsilon) continue;
        if (enter < 0 || (!bland && cost_[c] < cost_[enter])) enter = c;
        if (bland) break;
      }
      if (enter < 0) return true;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEpsilon) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        bool take = ratio < best;
        if (!take && ratio == best) {
          take = bland ? basis_[r] < basis_[leave] : a > at(leave, enter);
        }
        if (take) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      degenerate_run = best > 0.0 ? 0 : degenerate_run + 1;
      pivot(leave, enter);
    }
  }

 private:
  void eliminate(double* row, const double* prow, int pc) {
    const double factor = row[pc];
    if (factor == 0.0) return;
    for (int c = 0; c < width_; ++c) {
      if (prow[c] != 0.0) row[c] -= factor * prow[c];
    }
    row[pc] = 0.0;
  }

  int rows_;
  int cols_;
  int width_;
  std::vector<double> data_;
  std::vector<double> cost_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  check_well_formed(lp);

  // Shift and split variables so every column is nonnegative.
  std::vector<VarMap> vars(lp.num_vars);
  std::vector<Row> rows;
  int structural = 0;
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto lo = lp.lower(j);
    const auto hi = lp.upper(j);
    if (lo) {
      vars[j] = {*lo, structural++, -1};
      if (hi) {
        rows.push_back({{{vars[j].plus, 1.0}}, Relation::kLessEqual, *hi - *lo});
      }
    } else if (hi) {
      vars[j] = {*hi, -1, structural++};
    } else {
      vars[j].plus = structural++;
      vars[j].minus = structural++;
    }
  }

  for (const auto& c : lp.constraints) {
    Row row{{}, c.relation, c.rhs};
    for (const auto& t : c.terms) {
      const auto& v = vars[t.var];
      row.rhs -= t.coef * v.offset;
      if (v.plus >= 0) row.terms.emplace_back(v.plus, t.coef);
      if (v.minus >= 0) row.terms.emplace_back(v.minus, -t.coef);
    }
    rows.push_back(std::move(row));
  }

  // Nonnegative right-hand sides.
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      row.rhs = -row.rhs;
      for (auto& [col, coef] : row.terms) coef = -coef;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int slacks = 0;
  int artificials = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::kEqual) ++slacks;
    if (row.relation != Relation::kLessEqual) ++artificials;
  }
  const int first_slack = structural;
  const int first_artificial = structural + slacks;
  const int cols = first_artificial + artificials;

  Tableau tab(m, cols);
  double rhs_scale = 1.0;
  {
    int s = first_slack;
    int a = first_artificial;
    for (int r = 0; r < m; ++r) {
      const auto& row = rows[r];
      for (const auto& [col, coef] : row.terms) tab.at(r, col) += coef;
      tab.rhs(r) = row.rhs;
      rhs_scale = std::max(rhs_scale, row.rhs);
      switch (row.relation) {
        case Relation::kLessEqual:
          tab.at(r, s) = 1.0;
          tab.basis(r) = s++;
          break;
        case Relation::kGreaterEqual:
          tab.at(r, s++) = -1.0;
          tab.at(r, a) = 1.0;
          tab.basis(r) = a++;
          break;
        case Relation::kEqual:
          tab.at(r, a) = 1.0;
          tab.basis(r) = a++;
          break;
      }
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (artificials > 0) {
    for (int r = 0; r < m; ++r) {
      if (tab.basis(r) < first_artificial) continue;
      for (int c = 0; c <= cols; ++c) {
        if (c < cols && c >= first_artificial) continue;
        tab.cost(c) -= c == cols ? tab.rhs(r) : tab.at(r, c);
      }
    }
    const double zero_tol = 1e-9 * rhs_scale;
    std::vector<char> allowed(cols, 1);
    tab.optimize(allowed, /*stop_at_zero=*/true, zero_tol);
    const double infeasibility = -tab.cost_rhs();
    if (infeasibility > zero_tol) {
      return {LpStatus::kInfeasible, {}, 0.0};
    }
    // Drive zero-valued artificials out of the basis on their largest entry
    // where possible. Rows where that fails are redundant and stay inert.
    for (int r = 0; r < m; ++r) {
      if (tab.basis(r) < first_artificial) continue;
      int best = -1;
      for (int c = 0; c < first_artificial; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotEpsilon &&
            (best < 0 || std::abs(tab.at(r, c)) > std::abs(tab.at(r, best)))) {
          best = c;
        }
      }
      if (best >= 0) tab.pivot(r, best);
    }
  }

  // Phase 2 with the real objective; artificials may not re-enter.
  std::vector<double> cost(cols, 0.0);
  for (const auto& t : lp.objective) {
    const auto& v = vars[t.var];
    if (v.plus >= 0) cost[v.plus] += t.coef;
    if (v.minus >= 0) cost[v.minus] -= t.coef;
  }
  for (int c = 0; c <= cols; ++c) tab.cost(c) = c < cols ? cost[c] : 0.0;
  for (int r = 0; r < m; ++r) {
    const double cb = cost[tab.basis(r)];
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols; ++c) {
      tab.cost(c) -= cb * (c == cols ? tab.rhs(r) : tab.at(r, c));
    }
  }
  std::vector<char> allowed(cols, 1);
  std::fill(allowed.begin() + first_artificial, allowed.end(), 0);
  if (!lp.objective.empty() && !tab.optimize(allowed, false, 0.0)) {
    return {LpStatus::kUnbounded, {}, 0.0};
  }

  std::vector<double> column(cols, 0.0);
  for (int r = 0; r < m; ++r) column[tab.basis(r)] = tab.rhs(r);

  LpSolution sol;
  sol.status = LpStatus::kFeasible;
  sol.values.resize(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto& v = vars[j];
    double x = v.offset;
    if (v.plus >= 0) x += std::max(column[v.plus], 0.0);
    if (v.minus >= 0) x -= std::max(column[v.minus], 0.0);
    sol.values[j] = x;
  }
  for (const auto& t : lp.objective) {
    sol.objective_value += t.coef * sol.values[t.var];
  }

  const double violation = check_solution(lp, sol.values);
  if (violation > kFeasibilityTolerance) {
    throw NumericalFailure(fmt::format(
        "simplex ended on a point violating the program by {}", violation));
  }
  return sol;
}

double check_solution(const LinearProgram& lp, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(lp.num_vars)) {
    throw InvalidParams("value vector does not match num_vars");
  }
  double worst = 0.0;
  for (const auto& c : lp.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    double violation = 0.0;
    switch (c.relation) {
      case Relation::kLessEqual:
        violation = lhs - c.rhs;
        break;
      case Relation::kGreaterEqual:
        violation = c.rhs - lhs;
        break;
      case Relation::kEqual:
        violation = std::abs(lhs - c.rhs);
        break;
    }
    worst = std::max(worst, violation);
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    if (auto lo = lp.lower(j)) worst = std::max(worst, *lo - values[j]);
    if (auto hi = lp.upper(j)) worst = std::max(worst, values[j] - *hi);
  }
  return worst;
}

}  // namespace netdef::lp
