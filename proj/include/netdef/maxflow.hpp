#pragma once

#include <optional>
#include <span>
#include <vector>

namespace netdef::flow {

// Arc capacity: a finite nonnegative value or the uncuttable infinite tag.
class Capacity {
 public:
  static Capacity finite(double value) { return Capacity(value); }
  static Capacity infinite() { return Capacity(); }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  // Precondition: !is_infinite().
  double value() const { return *value_; }

  bool operator==(const Capacity&) const = default;

 private:
  Capacity() = default;
  explicit Capacity(double value) : value_(value) {}

  std::optional<double> value_;
};

struct Arc {
  int from;
  int to;
  Capacity capacity;
};

struct FlowNetwork {
  int num_nodes = 0;
  int source = 0;
  int sink = 1;
  std::vector<Arc> arcs;

  int add_node() { return num_nodes++; }
  int add_arc(int from, int to, Capacity capacity) {
    arcs.push_back({from, to, capacity});
    return static_cast<int>(arcs.size()) - 1;
  }
};

struct FlowResult {
  double value = 0.0;
  std::vector<double> arc_flows;
  // in_source_side[v] is true when v is reachable from the source in the
  // final residual graph.
  std::vector<bool> in_source_side;
};

// Level-graph (Dinic) maximum flow. Throws InvalidParams on a malformed
// network and UnboundedFlow when the source reaches the sink through
// infinite arcs only.
FlowResult max_flow(const FlowNetwork& net);

// Capacity of the arcs leaving the given source side; nullopt if an infinite
// arc crosses it.
std::optional<double> cut_capacity(const FlowNetwork& net,
                                   const std::vector<bool>& source_side);

// Largest of: capacity and sign violations, conservation residuals, and the
// gap between the flow value and the capacity of the reported cut. A flow
// that is maximum and consistent scores <= 1e-9.
double verify_flow(const FlowNetwork& net, const FlowResult& result);

}  // namespace netdef::flow
