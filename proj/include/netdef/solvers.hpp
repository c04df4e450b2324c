#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netdef/lp.hpp"
#include "netdef/maxflow.hpp"
#include "netdef/model.hpp"

namespace netdef {

struct SolveOptions {
  double tolerance = kModelTolerance;
  // Largest crucial set the brute-force oracle will enumerate.
  int max_crucial = 20;
};

struct SolveReport {
  std::string algorithm;
  double alpha = 0.0;  // result level the solver claims
  DefendingStrategy strategy;
  double evaluated_result = 0.0;
  double budget_used = 0.0;
  std::string notes;
};

// Outcome of a feasibility probe at a fixed result level.
struct Verdict {
  bool achievable = false;
  std::optional<DefendingStrategy> strategy;
};

// Single threshold model (LB == UB everywhere).
//
// Alpha is achievable iff some r >= 0 with sum(r) <= R gives every node with
// g > alpha a power of at least LB. Throws ModelMismatch otherwise.
lp::LinearProgram build_single_threshold_lp(const DefenseNetwork& net,
                                            double alpha);
Verdict achievable_single_threshold(const DefenseNetwork& net, double alpha,
                                    const SolveOptions& options = {});
SolveReport solve_single_threshold(const DefenseNetwork& net,
                                   const SolveOptions& options = {});

// Isolated model (all w == 0).
struct IsolatedFlowNetwork {
  flow::FlowNetwork network;
  // Indexed by node position in net.nodes; -1 when the node has no copy.
  std::vector<int> in_vertex;
  std::vector<int> out_vertex;
  std::vector<std::size_t> crucial;  // B_alpha
  std::vector<std::size_t> outside;  // V \ A_alpha
  // Arc carrying each node's threshold capacity, -1 when absent.
  std::vector<int> threshold_arc;
};

IsolatedFlowNetwork build_isolated_flow_network(
    const DefenseNetwork& net, double alpha, const SolveOptions& options = {});

struct IsolatedVerdict : Verdict {
  double base = 0.0;   // sum of LB over A_alpha
  double extra = 0.0;  // max-flow value; only set when base fits the budget
};

IsolatedVerdict achievable_isolated(const DefenseNetwork& net, double alpha,
                                    const SolveOptions& options = {});
SolveReport solve_isolated(const DefenseNetwork& net,
                           const SolveOptions& options = {});

// General model: LP relaxation, doubling rounding and the 2-approximation.
struct RelaxationLp {
  lp::LinearProgram program;
  std::vector<int> resource_var;   // per node
  std::vector<int> indicator_var;  // per node, -1 outside B ∪ (V \ A)
  std::vector<std::pair<std::size_t, std::size_t>> cover_edges;  // F
};

RelaxationLp build_relaxation_lp(const DefenseNetwork& net, double alpha,
                                 double budget);

// Feasible relaxation point at the given budget, if any.
std::optional<std::vector<double>> solve_relaxation(const DefenseNetwork& net,
                                                    double alpha,
                                                    double budget);

struct RoundedSolution {
  DefendingStrategy strategy;               // doubled resources
  std::map<std::string, int> indicator;     // rounded y over B ∪ (V \ A)
};

// Doubles the resources of a relaxation point feasible at budget R/2.
// Throws RoundingInfeasible if the doubled strategy does not reach alpha.
RoundedSolution round_solution(const DefenseNetwork& net, double alpha,
                               const std::vector<double>& lp_values,
                               const SolveOptions& options = {});
SolveReport solve_approx(const DefenseNetwork& net,
                         const SolveOptions& options = {});

// Baseline: repeatedly raise the most attractive target to its UB.
SolveReport solve_greedy(const DefenseNetwork& net,
                         const SolveOptions& options = {});

// Exact oracle.
//
// Least resource that gives UB to every node of `upgraded` (a subset of
// B_alpha), LB to every node of A_alpha, and LB to every neighbor outside
// A_alpha of a crucial node left out of `upgraded`.
double min_resource_for_subset(const DefenseNetwork& net, double alpha,
                               const std::set<std::string>& upgraded);
Verdict achievable_exact(const DefenseNetwork& net, double alpha,
                         const SolveOptions& options = {});
// Throws SizeLimit when a probed |B_alpha| exceeds options.max_crucial.
SolveReport solve_exact_bruteforce(const DefenseNetwork& net,
                                   const SolveOptions& options = {});

}  // namespace netdef
