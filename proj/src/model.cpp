#include "netdef/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/core.h>

#include "netdef/errors.hpp"

namespace netdef {

double DefendingStrategy::at(const std::string& id) const {
  auto it = allocation.find(id);
  return it == allocation.end() ? 0.0 : it->second;
}

double DefendingStrategy::total() const {
  double sum = 0.0;
  for (const auto& [id, r] : allocation) sum += r;
  return sum;
}

double PowerProfile::at(const std::string& id) const {
  auto it = power.find(id);
  return it == power.end() ? 0.0 : it->second;
}

Topology::Topology(const DefenseNetwork& net)
    : nodes_(net.nodes), adjacency_(net.nodes.size()) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i].id, i);
  }
  for (const auto& e : net.edges) {
    const std::size_t u = index(e.u);
    const std::size_t v = index(e.v);
    adjacency_[u].push_back({v, e.w});
    adjacency_[v].push_back({u, e.w});
  }
  edge_count_ = net.edges.size();

  lex_order_.resize(nodes_.size());
  std::iota(lex_order_.begin(), lex_order_.end(), std::size_t{0});
  std::sort(lex_order_.begin(), lex_order_.end(),
            [&](std::size_t a, std::size_t b) {
              return nodes_[a].id < nodes_[b].id;
            });
  lex_rank_.resize(nodes_.size());
  for (std::size_t k = 0; k < lex_order_.size(); ++k) {
    lex_rank_[lex_order_[k]] = k;
  }
}

std::optional<std::size_t> Topology::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Topology::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode(id);
  return it->second;
}

std::vector<double> allocation_vector(const Topology& topo,
                                      const DefendingStrategy& s) {
  std::vector<double> r(topo.size(), 0.0);
  for (const auto& [id, amount] : s.allocation) r[topo.index(id)] = amount;
  return r;
}

DefendingStrategy strategy_from_vector(const Topology& topo,
                                       std::span<const double> r) {
  DefendingStrategy s;
  for (std::size_t i = 0; i < topo.size(); ++i) {
    if (r[i] != 0.0) s.allocation[topo.node(i).id] = r[i];
  }
  return s;
}

std::vector<double> power_vector(const Topology& topo,
                                 std::span<const double> r) {
  std::vector<double> p(topo.size(), 0.0);
  for (std::size_t u = 0; u < topo.size(); ++u) {
    double sum = r[u];
    for (const auto& nb : topo.neighbors(u)) sum += nb.w * r[nb.node];
    p[u] = sum;
  }
  return p;
}

double gain_at(const Topology& topo, std::span<const double> power,
               std::size_t target, double tol) {
  const NodeSpec& node = topo.node(target);
  const double p = power[target];
  if (meets(p, node.ub, tol)) return 0.0;
  if (!meets(p, node.lb, tol)) return node.g;
  for (const auto& nb : topo.neighbors(target)) {
    if (!meets(power[nb.node], topo.node(nb.node).lb, tol)) {
      return node.g_prime;
    }
  }
  return 0.0;
}

AttackSummary evaluate_powers(const Topology& topo,
                              std::span<const double> power, double tol) {
  AttackSummary summary;
  summary.gains.resize(topo.size());
  bool first = true;
  for (std::size_t i : topo.lex_order()) {
    const double gain = gain_at(topo, power, i, tol);
    summary.gains[i] = gain;
    if (first || gain > summary.result) {
      summary.result = gain;
      summary.argmax = i;
      first = false;
    }
  }
  return summary;
}

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

std::vector<Violation> validate_network(const DefenseNetwork& net) {
  std::vector<Violation> out;
  auto report = [&](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  if (!finite_nonneg(net.resource)) {
    report("negative resource",
           fmt::format("resource {} must be finite and >= 0", net.resource));
  }

  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& n : net.nodes) {
    if (n.id.empty()) report("empty id", "node with empty id");
    if (!seen.emplace(n.id, 0).second) {
      report("duplicate id", fmt::format("node id '{}' appears twice", n.id));
    }
    for (auto [name, value] : {std::pair{"lb", n.lb}, std::pair{"ub", n.ub},
                               std::pair{"g", n.g},
                               std::pair{"g_prime", n.g_prime}}) {
      if (!finite_nonneg(value)) {
        report("negative value", fmt::format("node '{}': {} = {} must be "
                                             "finite and >= 0",
                                             n.id, name, value));
      }
    }
    if (n.lb > n.ub) {
      report("lb>ub", fmt::format("node '{}': lb {} exceeds ub {}", n.id,
                                  n.lb, n.ub));
    }
    if (n.g_prime > n.g) {
      report("g_prime>g", fmt::format("node '{}': g_prime {} exceeds g {}",
                                      n.id, n.g_prime, n.g));
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : net.edges) {
    bool endpoints_ok = true;
    for (const auto* id : {&e.u, &e.v}) {
      if (!seen.contains(*id)) {
        report("unknown endpoint",
               fmt::format("edge ({}, {}) references unknown node '{}'", e.u,
                           e.v, *id));
        endpoints_ok = false;
      }
    }
    if (e.u == e.v) {
      report("self-loop", fmt::format("edge ({}, {}) is a self-loop", e.u,
                                      e.v));
      endpoints_ok = false;
    }
    if (!finite_nonneg(e.w)) {
      report("negative weight", fmt::format("edge ({}, {}): w = {} must be "
                                            "finite and >= 0",
                                            e.u, e.v, e.w));
    }
    if (endpoints_ok) {
      auto key = std::minmax(e.u, e.v);
      if (!pairs.emplace(key.first, key.second).second) {
        report("duplicate edge",
               fmt::format("edge ({}, {}) appears twice", e.u, e.v));
      }
    }
  }
  return out;
}

std::vector<Violation> connectivity_warnings(const DefenseNetwork& net) {
  if (net.nodes.empty()) return {};
  // Ignore edges with bad endpoints; validate_network reports those.
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    index.emplace(net.nodes[i].id, i);
  }
  std::vector<std::size_t> parent(net.nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = net.nodes.size();
  for (const auto& e : net.edges) {
    auto a = index.find(e.u);
    auto b = index.find(e.v);
    if (a == index.end() || b == index.end()) continue;
    auto ra = root(a->second);
    auto rb = root(b->second);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  if (components == 1) return {};
  return {{"disconnected",
           fmt::format("graph has {} connected components", components)}};
}

PowerProfile defending_power(const DefenseNetwork& net,
                             const DefendingStrategy& s) {
  Topology topo(net);
  auto p = power_vector(topo, allocation_vector(topo, s));
  PowerProfile out;
  for (std::size_t i = 0; i < topo.size(); ++i) {
    out.power[topo.node(i).id] = p[i];
  }
  return out;
}

double attacker_gain(const DefenseNetwork& net, const PowerProfile& p,
                     const std::string& target, double tol) {
  Topology topo(net);
  std::vector<double> power(topo.size(), 0.0);
  for (const auto& [id, value] : p.power) power[topo.index(id)] = value;
  return gain_at(topo, power, topo.index(target), tol);
}

AttackReport defending_result(const DefenseNetwork& net,
                              const DefendingStrategy& s, double tol) {
  Topology topo(net);
  auto power = power_vector(topo, allocation_vector(topo, s));
  auto summary = evaluate_powers(topo, power, tol);
  AttackReport report;
  for (std::size_t i = 0; i < topo.size(); ++i) {
    report.gains[topo.node(i).id] = summary.gains[i];
  }
  report.result = summary.result;
  if (topo.size() > 0) report.argmax = topo.node(summary.argmax).id;
  return report;
}

std::vector<double> result_space(const DefenseNetwork& net) {
  std::vector<double> values{0.0};
  for (const auto& n : net.nodes) {
    values.push_back(n.g);
    values.push_back(n.g_prime);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::set<std::string> vulnerable_set(const DefenseNetwork& net, double alpha) {
  std::set<std::string> out;
  for (const auto& n : net.nodes) {
    if (n.g > alpha) out.insert(n.id);
  }
  return out;
}

std::set<std::string> crucial_set(const DefenseNetwork& net, double alpha) {
  std::set<std::string> out;
  for (const auto& n : net.nodes) {
    if (n.g_prime > alpha) out.insert(n.id);
  }
  return out;
}

}  // namespace netdef
