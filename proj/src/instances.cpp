#include "netdef/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include <fmt/core.h>

#include "netdef/errors.hpp"

namespace netdef::instances {

void check_formula(const DnfFormula& f) {
  if (f.num_vars < 0) throw InvalidParams("negative variable count");
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const auto& clause = f.clauses[j];
    if (clause.empty()) {
      throw InvalidParams(fmt::format("clause {} is empty", j + 1));
    }
    std::set<int> vars;
    for (const auto& lit : clause) {
      if (lit.var < 0 || lit.var >= f.num_vars) {
        throw InvalidParams(fmt::format("clause {} uses variable {} outside "
                                        "1..{}",
                                        j + 1, lit.var + 1, f.num_vars));
      }
      if (!vars.insert(lit.var).second) {
        throw InvalidParams(fmt::format(
            "clause {} mentions variable {} twice", j + 1, lit.var + 1));
      }
    }
  }
}

DefenseNetwork gen_integrality_gap() {
  DefenseNetwork net;
  net.nodes = {{"u", 0.0, 1.0, 1.0, 1.0}, {"v", 1.0, 2.0, 0.0, 0.0}};
  net.edges = {{"u", "v", 1.0}};
  net.resource = 1.0;
  return net;
}

DefenseNetwork gen_greedy_hard(GreedyHardKind kind, double value_scale) {
  const bool isolated = kind == GreedyHardKind::kIsolated;
  const double lb = isolated ? 1.0 : 3.0;
  const double ub = isolated ? 2.0 : 3.0;
  const double w = isolated ? 0.0 : 1.0;
  const double hi = 10.0 * value_scale;
  const double lo = 2.0 * value_scale;
  DefenseNetwork net;
  net.nodes = {{"u1", lb, ub, hi, hi}, {"u2", lb, ub, lo, lo},
               {"u3", lb, ub, hi, hi}};
  net.edges = {{"u1", "u2", w}, {"u2", "u3", w}};
  net.resource = 3.0;
  return net;
}

namespace {

std::string literal_id(const Literal& lit) {
  return fmt::format("{}x{}", lit.negated ? "~" : "", lit.var + 1);
}

}  // namespace

DefenseNetwork gen_dnf_reduction(const DnfFormula& f, int t) {
  check_formula(f);
  const int q = static_cast<int>(f.clauses.size());
  if (t < 1 || t > q) {
    throw InvalidParams(fmt::format("t = {} must lie in [1, {}]", t, q));
  }
  DefenseNetwork net;
  for (int i = 0; i < f.num_vars; ++i) {
    for (bool neg : {false, true}) {
      net.nodes.push_back({literal_id({i, neg}), 1.0, 1.0, 1.0, 1.0});
    }
    net.edges.push_back({literal_id({i, false}), literal_id({i, true}), 1.0});
  }
  const double clause_ub = 1.0 / q;
  for (int j = 0; j < q; ++j) {
    const std::string clause = fmt::format("C{}", j + 1);
    net.nodes.push_back({clause, 0.0, clause_ub, 1.0, 1.0});
    for (const auto& lit : f.clauses[j]) {
      const std::string connector = clause + ":" + literal_id(lit);
      net.nodes.push_back({connector, 1.0, 1.0, 0.0, 0.0});
      net.edges.push_back({connector, literal_id(lit), 1.0});
      net.edges.push_back({connector, clause, 0.0});
    }
  }
  net.resource = f.num_vars + static_cast<double>(q - t) / q;
  return net;
}

int dnf_max_sat(const DnfFormula& f) {
  check_formula(f);
  if (f.num_vars > 24) {
    throw SizeLimit(fmt::format("{} variables exceed the exhaustive limit of 24",
                                f.num_vars));
  }
  int best = 0;
  for (std::uint32_t assignment = 0; assignment < (1u << f.num_vars);
       ++assignment) {
    int satisfied = 0;
    for (const auto& clause : f.clauses) {
      const bool ok = std::all_of(clause.begin(), clause.end(), [&](auto lit) {
        const bool value = (assignment >> lit.var) & 1u;
        return value != lit.negated;
      });
      satisfied += ok;
    }
    best = std::max(best, satisfied);
  }
  return best;
}

namespace {

// Uniform draws built directly on the engine's bits so the stream does not
// depend on the standard library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  double uniform(Range r) { return uniform(r.lo, r.hi); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

void check_range(const char* name, Range r) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && 0.0 <= r.lo &&
        r.lo <= r.hi)) {
    throw InvalidParams(fmt::format("{} range [{}, {}] must satisfy "
                                    "0 <= lo <= hi",
                                    name, r.lo, r.hi));
  }
}

}  // namespace

DefenseNetwork gen_random(const RandomParams& params) {
  const long long n = params.n;
  const long long m = params.m;
  if (n < 1) throw InvalidParams("n must be at least 1");
  if (m < n - 1) {
    throw InvalidParams(fmt::format("m = {} is below n - 1 = {}", m, n - 1));
  }
  if (m > n * (n - 1) / 2) {
    throw InvalidParams(fmt::format("m = {} exceeds n (n - 1) / 2 = {}", m,
                                    n * (n - 1) / 2));
  }
  check_range("weight", params.weight);
  check_range("lb", params.lb);
  check_range("spread", params.spread);
  check_range("value", params.value);
  if (params.resource && !(*params.resource >= 0.0)) {
    throw InvalidParams("resource must be >= 0");
  }

  Draw draw(params.seed);
  const int width = static_cast<int>(std::to_string(n - 1).size());
  DefenseNetwork net;
  net.nodes.reserve(n);
  double lb_total = 0.0;
  for (long long i = 0; i < n; ++i) {
    NodeSpec node;
    node.id = fmt::format("v{:0{}}", i, width);
    node.lb = draw.uniform(params.lb);
    const double spread = draw.uniform(params.spread);
    node.ub = params.single_threshold ? node.lb : node.lb + spread;
    node.g = draw.uniform(params.value);
    node.g_prime = draw.uniform(0.0, node.g);
    lb_total += node.lb;
    net.nodes.push_back(std::move(node));
  }

  // Spanning tree over a random node order, then distinct extra pairs.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  draw.shuffle(order);
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto add_pair = [&](std::size_t a, std::size_t b) {
    auto key = std::minmax(a, b);
    if (!used.insert(key).second) return false;
    pairs.push_back(key);
    return true;
  };
  for (long long k = 1; k < n; ++k) {
    add_pair(order[k], order[draw.below(k)]);
  }
  const long long extra = m - (n - 1);
  if (extra > 0 && 2 * m > n * (n - 1) / 2) {
    // Dense: enumerate the complement and take a random prefix.
    std::vector<std::pair<std::size_t, std::size_t>> rest;
    for (long long a = 0; a < n; ++a) {
      for (long long b = a + 1; b < n; ++b) {
        if (!used.contains({a, b})) rest.emplace_back(a, b);
      }
    }
    draw.shuffle(rest);
    for (long long k = 0; k < extra; ++k) add_pair(rest[k].first, rest[k].second);
  } else {
    while (static_cast<long long>(pairs.size()) < m) {
      const std::size_t a = draw.below(n);
      const std::size_t b = draw.below(n);
      if (a != b) add_pair(a, b);
    }
  }

  net.edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const double w = draw.uniform(params.weight);
    net.edges.push_back(
        {net.nodes[a].id, net.nodes[b].id, params.isolated ? 0.0 : w});
  }
  net.resource = params.resource ? *params.resource
                                 : draw.uniform(0.0, lb_total);
  return net;
}

}  // namespace netdef::instances
