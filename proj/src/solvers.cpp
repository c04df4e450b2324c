#include "netdef/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <fmt/core.h>

#include "netdef/errors.hpp"

namespace netdef {

namespace {

using lp::Relation;
using lp::Term;

// Partition of the nodes at one result level.
struct Levels {
  std::vector<char> vulnerable;  // g > alpha
  std::vector<char> crucial;     // g' > alpha
};

Levels classify(const Topology& topo, double alpha) {
  Levels lv{std::vector<char>(topo.size()), std::vector<char>(topo.size())};
  for (std::size_t i = 0; i < topo.size(); ++i) {
    lv.vulnerable[i] = topo.node(i).g > alpha;
    lv.crucial[i] = topo.node(i).g_prime > alpha;
  }
  return lv;
}

// Power of node u as terms over the per-node resource variables.
std::vector<Term> power_terms(const Topology& topo, std::size_t u,
                              const std::vector<int>& resource_var) {
  std::vector<Term> terms{{resource_var[u], 1.0}};
  for (const auto& nb : topo.neighbors(u)) {
    if (nb.w != 0.0) terms.push_back({resource_var[nb.node], nb.w});
  }
  return terms;
}

std::vector<int> add_resource_vars(lp::LinearProgram& program,
                                   std::size_t count) {
  std::vector<int> vars(count);
  for (auto& v : vars) v = program.add_variable(0.0);
  return vars;
}

std::vector<Term> budget_terms(const std::vector<int>& resource_var) {
  std::vector<Term> terms;
  terms.reserve(resource_var.size());
  for (int v : resource_var) terms.push_back({v, 1.0});
  return terms;
}

std::vector<double> nonnegative(std::vector<double> r) {
  for (auto& x : r) x = std::max(x, 0.0);
  return r;
}

SolveReport make_report(const Topology& topo, std::string algorithm,
                        double alpha, const std::vector<double>& r,
                        std::string notes, double tol) {
  SolveReport report;
  report.algorithm = std::move(algorithm);
  report.alpha = alpha;
  report.strategy = strategy_from_vector(topo, r);
  report.evaluated_result =
      evaluate_powers(topo, power_vector(topo, r), tol).result;
  report.budget_used = std::accumulate(r.begin(), r.end(), 0.0);
  report.notes = std::move(notes);
  return report;
}

// Lowest level in the ascending result space whose probe succeeds. The top
// level (max g) always succeeds because no node is vulnerable there.
template <class Probe>
std::pair<double, std::vector<double>> lowest_achievable(
    const std::vector<double>& space, Probe probe) {
  std::size_t lo = 0;
  std::size_t hi = space.size() - 1;
  auto best = probe(space[hi]);
  if (!best) {
    throw Error(fmt::format("result level {} unexpectedly unachievable",
                            space[hi]));
  }
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto witness = probe(space[mid])) {
      best = std::move(witness);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {space[hi], std::move(*best)};
}

std::vector<double> result_levels(const Topology& topo) {
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < topo.size(); ++i) {
    values.push_back(topo.node(i).g);
    values.push_back(topo.node(i).g_prime);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

// ----- single threshold -----------------------------------------------------

void require_single_threshold(const Topology& topo, double tol) {
  for (std::size_t i = 0; i < topo.size(); ++i) {
    const auto& n = topo.node(i);
    if (std::abs(n.ub - n.lb) > tol) {
      throw ModelMismatch(fmt::format(
          "single-threshold solver needs lb == ub; node '{}' has lb {} ub {}",
          n.id, n.lb, n.ub));
    }
  }
}

lp::LinearProgram single_threshold_lp(const Topology& topo, double alpha,
                                      double budget) {
  lp::LinearProgram program;
  const auto r = add_resource_vars(program, topo.size());
  program.add_constraint(budget_terms(r), Relation::kLessEqual, budget);
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (topo.node(u).g > alpha) {
      program.add_constraint(power_terms(topo, u, r), Relation::kGreaterEqual,
                             topo.node(u).lb);
    }
  }
  return program;
}

std::optional<std::vector<double>> probe_single_threshold(
    const Topology& topo, double alpha, double budget) {
  auto sol = lp::solve_lp(single_threshold_lp(topo, alpha, budget));
  if (sol.status != lp::LpStatus::kFeasible) return std::nullopt;
  return nonnegative(std::move(sol.values));
}

// ----- isolated ---------------------------------------------------------------

void require_isolated(const Topology& topo, double tol) {
  for (std::size_t u = 0; u < topo.size(); ++u) {
    for (const auto& nb : topo.neighbors(u)) {
      if (std::abs(nb.w) > tol) {
        throw ModelMismatch(fmt::format(
            "isolated solver needs w == 0; edge ({}, {}) has w {}",
            topo.node(u).id, topo.node(nb.node).id, nb.w));
      }
    }
  }
}

IsolatedFlowNetwork isolated_network(const Topology& topo, double alpha) {
  const auto lv = classify(topo, alpha);
  IsolatedFlowNetwork out;
  auto& fn = out.network;
  fn.source = fn.add_node();
  fn.sink = fn.add_node();
  out.in_vertex.assign(topo.size(), -1);
  out.out_vertex.assign(topo.size(), -1);
  out.threshold_arc.assign(topo.size(), -1);

  for (std::size_t u = 0; u < topo.size(); ++u) {
    const auto& n = topo.node(u);
    const bool is_crucial = lv.crucial[u];
    const bool is_outside = !lv.vulnerable[u];
    if (!is_crucial && !is_outside) continue;
    out.in_vertex[u] = fn.add_node();
    out.out_vertex[u] = fn.add_node();
    const double cap = is_crucial ? n.ub - n.lb : n.lb;
    out.threshold_arc[u] = fn.add_arc(out.in_vertex[u], out.out_vertex[u],
                                      flow::Capacity::finite(cap));
    if (is_crucial) {
      out.crucial.push_back(u);
      fn.add_arc(fn.source, out.in_vertex[u], flow::Capacity::infinite());
    } else {
      out.outside.push_back(u);
      fn.add_arc(out.out_vertex[u], fn.sink, flow::Capacity::infinite());
    }
  }
  for (std::size_t u : out.crucial) {
    for (const auto& nb : topo.neighbors(u)) {
      if (!lv.vulnerable[nb.node]) {
        fn.add_arc(out.out_vertex[u], out.in_vertex[nb.node],
                   flow::Capacity::infinite());
      }
    }
  }
  return out;
}

struct IsolatedProbe {
  bool achievable = false;
  double base = 0.0;
  double extra = 0.0;
  std::vector<double> allocation;
};

IsolatedProbe probe_isolated(const Topology& topo, double alpha, double budget,
                             double tol) {
  IsolatedProbe probe;
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (topo.node(u).g > alpha) probe.base += topo.node(u).lb;
  }
  if (probe.base > budget + tol) return probe;

  const auto iso = isolated_network(topo, alpha);
  const auto flow_result = flow::max_flow(iso.network);
  probe.extra = flow_result.value;
  if (probe.base + probe.extra > budget + tol) return probe;

  probe.achievable = true;
  auto& r = probe.allocation;
  r.assign(topo.size(), 0.0);
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (topo.node(u).g > alpha) r[u] = topo.node(u).lb;
  }
  for (std::size_t u : iso.crucial) {
    if (!flow_result.in_source_side[iso.out_vertex[u]]) {
      r[u] = topo.node(u).ub;
      continue;
    }
    for (const auto& nb : topo.neighbors(u)) {
      if (topo.node(nb.node).g <= alpha) r[nb.node] = topo.node(nb.node).lb;
    }
  }
  // When no vulnerable node needs resource the empty strategy is the witness;
  // otherwise the leftover goes to the smallest id, which only lowers gains.
  const double used = std::accumulate(r.begin(), r.end(), 0.0);
  if (probe.base > 0.0 && budget > used) {
    r[topo.lex_order().front()] += budget - used;
  }
  return probe;
}

// ----- relaxation ---------------------------------------------------------------

RelaxationLp relaxation(const Topology& topo, double alpha, double budget) {
  const auto lv = classify(topo, alpha);
  RelaxationLp out;
  auto& program = out.program;
  out.resource_var = add_resource_vars(program, topo.size());
  out.indicator_var.assign(topo.size(), -1);
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (lv.crucial[u] || !lv.vulnerable[u]) {
      out.indicator_var[u] = program.add_variable(0.0, 1.0);
    }
  }

  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (!lv.crucial[u]) continue;
    for (const auto& nb : topo.neighbors(u)) {
      if (lv.vulnerable[nb.node]) continue;
      out.cover_edges.emplace_back(u, nb.node);
      program.add_constraint({{out.indicator_var[u], 1.0},
                              {out.indicator_var[nb.node], 1.0}},
                             Relation::kGreaterEqual, 1.0);
    }
  }

  for (std::size_t u = 0; u < topo.size(); ++u) {
    const auto& n = topo.node(u);
    auto terms = power_terms(topo, u, out.resource_var);
    if (lv.crucial[u]) {
      // LB + y (UB - LB) <= p
      terms.push_back({out.indicator_var[u], -(n.ub - n.lb)});
      program.add_constraint(std::move(terms), Relation::kGreaterEqual, n.lb);
    } else if (lv.vulnerable[u]) {
      program.add_constraint(std::move(terms), Relation::kGreaterEqual, n.lb);
    } else {
      // y LB <= p
      terms.push_back({out.indicator_var[u], -n.lb});
      program.add_constraint(std::move(terms), Relation::kGreaterEqual, 0.0);
    }
  }
  program.add_constraint(budget_terms(out.resource_var), Relation::kLessEqual,
                         budget);
  return out;
}

// ----- brute force ------------------------------------------------------------

lp::LinearProgram subset_lp(const Topology& topo, const Levels& lv,
                            const std::vector<char>& upgraded) {
  lp::LinearProgram program;
  const auto r = add_resource_vars(program, topo.size());
  program.objective = budget_terms(r);

  std::vector<char> needs_lb(topo.size(), 0);
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (lv.vulnerable[u]) needs_lb[u] = 1;
    if (lv.crucial[u] && !upgraded[u]) {
      for (const auto& nb : topo.neighbors(u)) needs_lb[nb.node] = 1;
    }
  }
  for (std::size_t u = 0; u < topo.size(); ++u) {
    double threshold = 0.0;
    bool constrained = false;
    if (upgraded[u]) {
      threshold = topo.node(u).ub;
      constrained = true;
    }
    if (needs_lb[u]) {
      threshold = std::max(threshold, topo.node(u).lb);
      constrained = true;
    }
    if (constrained) {
      program.add_constraint(power_terms(topo, u, r), Relation::kGreaterEqual,
                             threshold);
    }
  }
  return program;
}

std::optional<std::vector<double>> probe_exact(const Topology& topo,
                                               double alpha, double budget,
                                               const SolveOptions& options) {
  const auto lv = classify(topo, alpha);
  std::vector<std::size_t> crucial;
  for (std::size_t u = 0; u < topo.size(); ++u) {
    if (lv.crucial[u]) crucial.push_back(u);
  }
  if (crucial.size() > static_cast<std::size_t>(options.max_crucial) ||
      crucial.size() >= 63) {
    throw SizeLimit(fmt::format(
        "brute force over {} crucial nodes at level {} exceeds the limit of {}",
        crucial.size(), alpha, options.max_crucial));
  }
  std::vector<char> upgraded(topo.size(), 0);
  const std::uint64_t subsets = std::uint64_t{1} << crucial.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t k = 0; k < crucial.size(); ++k) {
      upgraded[crucial[k]] = (mask >> k) & 1;
    }
    auto sol = lp::solve_lp(subset_lp(topo, lv, upgraded));
    if (sol.status == lp::LpStatus::kFeasible &&
        sol.objective_value <= budget + options.tolerance) {
      return nonnegative(std::move(sol.values));
    }
  }
  return std::nullopt;
}

// ----- greedy -----------------------------------------------------------------

std::vector<double> greedy_allocation(const Topology& topo, double budget,
                                      double tol) {
  std::vector<double> r(topo.size(), 0.0);
  double remaining = budget;
  // Each productive round lifts its target to UB for good or spends the rest
  // of the budget, so n + 1 rounds always suffice.
  for (std::size_t round = 0; round <= topo.size(); ++round) {
    const auto power = power_vector(topo, r);
    const auto summary = evaluate_powers(topo, power, tol);
    if (summary.result <= 0.0 || remaining <= tol) break;
    const std::size_t target = summary.argmax;
    const double amount =
        std::min(topo.node(target).ub - power[target], remaining);
    if (amount <= 0.0) break;
    r[target] += amount;
    remaining -= amount;
  }
  return r;
}

}  // namespace

// ----- public API ---------------------------------------------------------------

lp::LinearProgram build_single_threshold_lp(const DefenseNetwork& net,
                                            double alpha) {
  Topology topo(net);
  require_single_threshold(topo, kModelTolerance);
  return single_threshold_lp(topo, alpha, net.resource);
}

Verdict achievable_single_threshold(const DefenseNetwork& net, double alpha,
                                    const SolveOptions& options) {
  Topology topo(net);
  require_single_threshold(topo, options.tolerance);
  Verdict verdict;
  if (auto r = probe_single_threshold(topo, alpha, net.resource)) {
    verdict.achievable = true;
    verdict.strategy = strategy_from_vector(topo, *r);
  }
  return verdict;
}

SolveReport solve_single_threshold(const DefenseNetwork& net,
                                   const SolveOptions& options) {
  Topology topo(net);
  require_single_threshold(topo, options.tolerance);
  auto [alpha, r] = lowest_achievable(result_levels(topo), [&](double level) {
    return probe_single_threshold(topo, level, net.resource);
  });
  return make_report(topo, "single-threshold", alpha, r,
                     "exact: LP feasibility + binary search",
                     options.tolerance);
}

IsolatedFlowNetwork build_isolated_flow_network(const DefenseNetwork& net,
                                                double alpha,
                                                const SolveOptions& options) {
  Topology topo(net);
  require_isolated(topo, options.tolerance);
  return isolated_network(topo, alpha);
}

IsolatedVerdict achievable_isolated(const DefenseNetwork& net, double alpha,
                                    const SolveOptions& options) {
  Topology topo(net);
  require_isolated(topo, options.tolerance);
  auto probe = probe_isolated(topo, alpha, net.resource, options.tolerance);
  IsolatedVerdict verdict;
  verdict.achievable = probe.achievable;
  verdict.base = probe.base;
  verdict.extra = probe.extra;
  if (probe.achievable) {
    verdict.strategy = strategy_from_vector(topo, probe.allocation);
  }
  return verdict;
}

SolveReport solve_isolated(const DefenseNetwork& net,
                           const SolveOptions& options) {
  Topology topo(net);
  require_isolated(topo, options.tolerance);
  auto [alpha, r] = lowest_achievable(
      result_levels(topo),
      [&](double level) -> std::optional<std::vector<double>> {
        auto probe = probe_isolated(topo, level, net.resource,
                                    options.tolerance);
        if (!probe.achievable) return std::nullopt;
        return std::move(probe.allocation);
      });
  return make_report(topo, "isolated", alpha, r,
                     "exact: min cut + binary search", options.tolerance);
}

RelaxationLp build_relaxation_lp(const DefenseNetwork& net, double alpha,
                                 double budget) {
  return relaxation(Topology(net), alpha, budget);
}

std::optional<std::vector<double>> solve_relaxation(const DefenseNetwork& net,
                                                    double alpha,
                                                    double budget) {
  auto sol = lp::solve_lp(build_relaxation_lp(net, alpha, budget).program);
  if (sol.status != lp::LpStatus::kFeasible) return std::nullopt;
  return std::move(sol.values);
}

RoundedSolution round_solution(const DefenseNetwork& net, double alpha,
                               const std::vector<double>& lp_values,
                               const SolveOptions& options) {
  Topology topo(net);
  const auto layout = relaxation(topo, alpha, 0.0);
  if (lp_values.size() != static_cast<std::size_t>(layout.program.num_vars)) {
    throw InvalidParams("relaxation point has the wrong number of variables");
  }
  RoundedSolution out;
  std::vector<double> r(topo.size());
  for (std::size_t u = 0; u < topo.size(); ++u) {
    r[u] = 2.0 * std::max(lp_values[layout.resource_var[u]], 0.0);
    if (layout.indicator_var[u] >= 0) {
      out.indicator[topo.node(u).id] =
          lp_values[layout.indicator_var[u]] >= 0.5 ? 1 : 0;
    }
  }
  out.strategy = strategy_from_vector(topo, r);
  const double result =
      evaluate_powers(topo, power_vector(topo, r), options.tolerance).result;
  if (result > alpha + options.tolerance) {
    throw RoundingInfeasible(fmt::format(
        "doubled strategy reaches result {} above level {}", result, alpha));
  }
  return out;
}

SolveReport solve_approx(const DefenseNetwork& net,
                         const SolveOptions& options) {
  Topology topo(net);
  const double half = net.resource / 2.0;
  auto [alpha, point] = lowest_achievable(
      result_levels(topo),
      [&](double level) -> std::optional<std::vector<double>> {
        auto sol = lp::solve_lp(relaxation(topo, level, half).program);
        if (sol.status != lp::LpStatus::kFeasible) return std::nullopt;
        return std::move(sol.values);
      });
  auto rounded = round_solution(net, alpha, point, options);
  auto r = allocation_vector(topo, rounded.strategy);
  return make_report(topo, "approx", alpha, r, "alpha <= OPT(R/2)",
                     options.tolerance);
}

SolveReport solve_greedy(const DefenseNetwork& net,
                         const SolveOptions& options) {
  Topology topo(net);
  auto r = greedy_allocation(topo, net.resource, options.tolerance);
  auto report = make_report(topo, "greedy", 0.0, r, "baseline, no guarantee",
                            options.tolerance);
  report.alpha = report.evaluated_result;
  return report;
}

double min_resource_for_subset(const DefenseNetwork& net, double alpha,
                               const std::set<std::string>& upgraded) {
  Topology topo(net);
  const auto lv = classify(topo, alpha);
  std::vector<char> mask(topo.size(), 0);
  for (const auto& id : upgraded) {
    const std::size_t u = topo.index(id);
    if (!lv.crucial[u]) {
      throw InvalidParams(fmt::format(
          "node '{}' is not crucial at level {}", id, alpha));
    }
    mask[u] = 1;
  }
  auto sol = lp::solve_lp(subset_lp(topo, lv, mask));
  if (sol.status != lp::LpStatus::kFeasible) {
    throw NumericalFailure("subset program reported infeasible");
  }
  return sol.objective_value;
}

Verdict achievable_exact(const DefenseNetwork& net, double alpha,
                         const SolveOptions& options) {
  Topology topo(net);
  Verdict verdict;
  if (auto r = probe_exact(topo, alpha, net.resource, options)) {
    verdict.achievable = true;
    verdict.strategy = strategy_from_vector(topo, *r);
  }
  return verdict;
}

SolveReport solve_exact_bruteforce(const DefenseNetwork& net,
                                   const SolveOptions& options) {
  Topology topo(net);
  for (double level : result_levels(topo)) {
    if (auto r = probe_exact(topo, level, net.resource, options)) {
      return make_report(topo, "exact", level, *r,
                         "exact: enumeration over crucial subsets",
                         options.tolerance);
    }
  }
  throw Error("no result level achievable");
}

}  // namespace netdef
