#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace netdef {

// Absolute slack for threshold tests: p >= T is evaluated as p >= T - tol.
inline constexpr double kModelTolerance = 1e-9;

struct NodeSpec {
  std::string id;
  double lb = 0.0;
  double ub = 0.0;
  double g = 0.0;
  double g_prime = 0.0;

  bool operator==(const NodeSpec&) const = default;
};

// Undirected; (u, v) and (v, u) name the same edge.
struct EdgeSpec {
  std::string u;
  std::string v;
  double w = 0.0;

  bool operator==(const EdgeSpec&) const = default;
};

struct DefenseNetwork {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  double resource = 0.0;

  bool operator==(const DefenseNetwork&) const = default;
};

// Node id -> allocated resource. Missing ids read as zero.
struct DefendingStrategy {
  std::map<std::string, double> allocation;

  double at(const std::string& id) const;
  double total() const;

  bool operator==(const DefendingStrategy&) const = default;
};

struct PowerProfile {
  std::map<std::string, double> power;

  double at(const std::string& id) const;
};

struct AttackReport {
  std::map<std::string, double> gains;
  double result = 0.0;
  std::string argmax;
};

struct Violation {
  std::string code;
  std::string message;
};

// Index-based view of a DefenseNetwork: node i is net.nodes[i], and every
// undirected edge appears in the adjacency of both endpoints. Solvers work
// on this view; the map-based functions below are thin wrappers over it.
class Topology {
 public:
  struct Neighbor {
    std::size_t node;
    double w;
  };

  // Throws UnknownNode if an edge references a missing id.
  explicit Topology(const DefenseNetwork& net);

  std::size_t size() const noexcept { return nodes_.size(); }
  const NodeSpec& node(std::size_t i) const { return nodes_[i]; }
  std::span<const Neighbor> neighbors(std::size_t i) const {
    return adjacency_[i];
  }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws UnknownNode.
  std::size_t index(const std::string& id) const;

  // Node indices sorted by id; lex_order()[0] is the smallest id.
  const std::vector<std::size_t>& lex_order() const noexcept {
    return lex_order_;
  }
  // Position of node i in lex_order().
  std::size_t lex_rank(std::size_t i) const { return lex_rank_[i]; }

 private:
  std::vector<NodeSpec> nodes_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> lex_order_;
  std::vector<std::size_t> lex_rank_;
  std::size_t edge_count_ = 0;
};

inline bool meets(double value, double threshold, double tol) {
  return value >= threshold - tol;
}

// Dense allocation vector in node order. Throws UnknownNode for keys that
// are not nodes of the topology.
std::vector<double> allocation_vector(const Topology& topo,
                                      const DefendingStrategy& s);
DefendingStrategy strategy_from_vector(const Topology& topo,
                                       std::span<const double> r);

std::vector<double> power_vector(const Topology& topo,
                                 std::span<const double> r);

double gain_at(const Topology& topo, std::span<const double> power,
               std::size_t target, double tol = kModelTolerance);

struct AttackSummary {
  std::vector<double> gains;
  double result = 0.0;
  std::size_t argmax = 0;  // meaningless when the network has no nodes
};

AttackSummary evaluate_powers(const Topology& topo,
                              std::span<const double> power,
                              double tol = kModelTolerance);

// Every violated NodeSpec/EdgeSpec/DefenseNetwork invariant. Disconnection is
// not a violation; see connectivity_warnings.
std::vector<Violation> validate_network(const DefenseNetwork& net);
std::vector<Violation> connectivity_warnings(const DefenseNetwork& net);

PowerProfile defending_power(const DefenseNetwork& net,
                             const DefendingStrategy& s);
double attacker_gain(const DefenseNetwork& net, const PowerProfile& p,
                     const std::string& target, double tol = kModelTolerance);
AttackReport defending_result(const DefenseNetwork& net,
                              const DefendingStrategy& s,
                              double tol = kModelTolerance);

// {0} ∪ {g_u} ∪ {g'_u}, ascending and deduplicated.
std::vector<double> result_space(const DefenseNetwork& net);

// A_alpha = {u : g_u > alpha}.
std::set<std::string> vulnerable_set(const DefenseNetwork& net, double alpha);
// B_alpha = {u : g'_u > alpha}.
std::set<std::string> crucial_set(const DefenseNetwork& net, double alpha);

}  // namespace netdef
