#include "netdef/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>

#include <fmt/core.h>

#include "netdef/errors.hpp"

namespace netdef::flow {

namespace {

struct Edge {
  int to;
  int rev;           // index of the paired edge in adjacency[to]
  bool infinite;     // forward arc with infinite capacity
  double capacity;   // 0 for reverse edges; unused when infinite
  double flow = 0.0; // may be negative on reverse edges
};

class Dinic {
 public:
  Dinic(const FlowNetwork& net, double eps)
      : net_(net), eps_(eps), adjacency_(net.num_nodes),
        arc_slot_(net.arcs.size()), level_(net.num_nodes),
        next_(net.num_nodes) {
    for (std::size_t i = 0; i < net.arcs.size(); ++i) {
      const Arc& a = net.arcs[i];
      const bool inf = a.capacity.is_infinite();
      const double cap = inf ? 0.0 : a.capacity.value();
      const int fwd = static_cast<int>(adjacency_[a.from].size());
      const int bwd = static_cast<int>(adjacency_[a.to].size()) +
                      (a.from == a.to ? 1 : 0);
      adjacency_[a.from].push_back({a.to, bwd, inf, cap});
      adjacency_[a.to].push_back({a.from, fwd, false, 0.0});
      arc_slot_[i] = {a.from, fwd};
    }
  }

  bool residual_positive(const Edge& e) const {
    return e.infinite || e.capacity - e.flow > eps_;
  }

  double run() {
    double total = 0.0;
    while (build_levels()) {
      std::fill(next_.begin(), next_.end(), std::size_t{0});
      for (;;) {
        const double pushed = augment(net_.source, std::nullopt);
        if (pushed <= 0.0) break;
        total += pushed;
      }
    }
    return total;
  }

  std::vector<bool> reachable_from_source() const {
    std::vector<bool> seen(net_.num_nodes, false);
    std::queue<int> queue;
    seen[net_.source] = true;
    queue.push(net_.source);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (const Edge& e : adjacency_[u]) {
        if (!seen[e.to] && residual_positive(e)) {
          seen[e.to] = true;
          queue.push(e.to);
        }
      }
    }
    return seen;
  }

  double arc_flow(std::size_t arc) const {
    const auto [node, slot] = arc_slot_[arc];
    return adjacency_[node][slot].flow;
  }

 private:
  bool build_levels() {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> queue;
    level_[net_.source] = 0;
    queue.push(net_.source);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (const Edge& e : adjacency_[u]) {
        if (level_[e.to] < 0 && residual_positive(e)) {
          level_[e.to] = level_[u] + 1;
          queue.push(e.to);
        }
      }
    }
    return level_[net_.sink] >= 0;
  }

  // limit == nullopt means no finite arc on the path so far.
  double augment(int u, std::optional<double> limit) {
    if (u == net_.sink) return limit.value_or(0.0);
    for (std::size_t& i = next_[u]; i < adjacency_[u].size(); ++i) {
      Edge& e = adjacency_[u][i];
      if (level_[e.to] != level_[u] + 1 || !residual_positive(e)) continue;
      std::optional<double> next_limit = limit;
      if (!e.infinite) {
        const double residual = e.capacity - e.flow;
        next_limit = limit ? std::min(*limit, residual) : residual;
      }
      const double pushed = augment(e.to, next_limit);
      if (pushed > 0.0) {
        e.flow += pushed;
        adjacency_[e.to][e.rev].flow -= pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  const FlowNetwork& net_;
  double eps_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::pair<int, int>> arc_slot_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

void check_network(const FlowNetwork& net) {
  if (net.num_nodes < 2) throw InvalidParams("flow network needs >= 2 nodes");
  auto in_range = [&](int v) { return v >= 0 && v < net.num_nodes; };
  if (!in_range(net.source) || !in_range(net.sink)) {
    throw InvalidParams("source or sink out of range");
  }
  if (net.source == net.sink) throw InvalidParams("source equals sink");
  for (const Arc& a : net.arcs) {
    if (!in_range(a.from) || !in_range(a.to)) {
      throw InvalidParams(fmt::format("arc ({}, {}) out of range", a.from, a.to));
    }
    if (!a.capacity.is_infinite() &&
        !(std::isfinite(a.capacity.value()) && a.capacity.value() >= 0.0)) {
      throw InvalidParams(fmt::format("arc ({}, {}) has invalid capacity",
                                      a.from, a.to));
    }
  }
}

bool sink_reachable_through_infinite_arcs(const FlowNetwork& net) {
  std::vector<std::vector<int>> out(net.num_nodes);
  for (const Arc& a : net.arcs) {
    if (a.capacity.is_infinite()) out[a.from].push_back(a.to);
  }
  std::vector<bool> seen(net.num_nodes, false);
  std::vector<int> stack{net.source};
  seen[net.source] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == net.sink) return true;
    for (int v : out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
  check_network(net);
  if (sink_reachable_through_infinite_arcs(net)) {
    throw UnboundedFlow("every source-sink cut has infinite capacity");
  }
  double scale = 1.0;
  for (const Arc& a : net.arcs) {
    if (!a.capacity.is_infinite()) scale = std::max(scale, a.capacity.value());
  }
  Dinic dinic(net, 1e-12 * scale);
  dinic.run();

  FlowResult result;
  result.arc_flows.resize(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    result.arc_flows[i] = dinic.arc_flow(i);
    const Arc& a = net.arcs[i];
    if (a.from == net.source) result.value += result.arc_flows[i];
    if (a.to == net.source) result.value -= result.arc_flows[i];
  }
  result.in_source_side = dinic.reachable_from_source();
  return result;
}

std::optional<double> cut_capacity(const FlowNetwork& net,
                                   const std::vector<bool>& source_side) {
  double total = 0.0;
  for (const Arc& a : net.arcs) {
    if (source_side[a.from] && !source_side[a.to]) {
      if (a.capacity.is_infinite()) return std::nullopt;
      total += a.capacity.value();
    }
  }
  return total;
}

double verify_flow(const FlowNetwork& net, const FlowResult& result) {
  if (result.arc_flows.size() != net.arcs.size() ||
      result.in_source_side.size() != static_cast<std::size_t>(net.num_nodes)) {
    throw InvalidParams("flow result shape does not match the network");
  }
  double worst = 0.0;
  std::vector<double> balance(net.num_nodes, 0.0);
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const Arc& a = net.arcs[i];
    const double f = result.arc_flows[i];
    worst = std::max(worst, -f);
    if (!a.capacity.is_infinite()) {
      worst = std::max(worst, f - a.capacity.value());
    }
    balance[a.from] -= f;
    balance[a.to] += f;
  }
  for (int v = 0; v < net.num_nodes; ++v) {
    if (v == net.source || v == net.sink) continue;
    worst = std::max(worst, std::abs(balance[v]));
  }
  worst = std::max(worst, std::abs(-balance[net.source] - result.value));

  if (!result.in_source_side[net.source] || result.in_source_side[net.sink]) {
    return std::max(worst, std::abs(result.value) + 1.0);
  }
  const auto cut = cut_capacity(net, result.in_source_side);
  if (!cut) return std::numeric_limits<double>::infinity();
  return std::max(worst, std::abs(*cut - result.value));
}

}  // namespace netdef::flow
