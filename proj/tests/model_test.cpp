#include <doctest.h>

#include <algorithm>
#include <random>

#include "netdef/errors.hpp"
#include "netdef/instances.hpp"
#include "netdef/model.hpp"
#include "oracles.hpp"

using namespace netdef;
using netdef::instances::GreedyHardKind;

namespace {

DefenseNetwork gap2() { return instances::gen_integrality_gap(); }
DefenseNetwork path3_iso() {
  return instances::gen_greedy_hard(GreedyHardKind::kIsolated);
}

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("validate_network") {
  CHECK(validate_network(gap2()).empty());
  CHECK(validate_network(path3_iso()).empty());

  SUBCASE("lb above ub") {
    auto net = gap2();
    net.nodes[0].lb = 2.0;
    net.nodes[0].ub = 1.0;
    auto vs = validate_network(net);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].code == "lb>ub");
  }
  SUBCASE("unknown endpoint") {
    auto net = gap2();
    net.edges.push_back({"u", "x9", 0.5});
    auto vs = validate_network(net);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].code == "unknown endpoint");
    CHECK(vs[0].message.find("x9") != std::string::npos);
  }
  SUBCASE("other invariants") {
    auto net = gap2();
    net.nodes.push_back({"u", 0, 1, 1, 1});
    net.nodes[1].g_prime = 3.0;
    net.edges.push_back({"v", "u", 0.2});
    net.edges.push_back({"v", "v", 0.2});
    net.edges[0].w = -1.0;
    auto vs = validate_network(net);
    CHECK(has_code(vs, "duplicate id"));
    CHECK(has_code(vs, "g_prime>g"));
    CHECK(has_code(vs, "duplicate edge"));
    CHECK(has_code(vs, "self-loop"));
    CHECK(has_code(vs, "negative weight"));
  }
  SUBCASE("weights above one are fine") {
    auto net = gap2();
    net.edges[0].w = 7.5;
    CHECK(validate_network(net).empty());
  }
}

TEST_CASE("disconnection is only a warning") {
  auto net = gap2();
  net.nodes.push_back({"z", 0, 0, 0, 0});
  CHECK(validate_network(net).empty());
  auto ws = connectivity_warnings(net);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].code == "disconnected");
  CHECK(connectivity_warnings(gap2()).empty());
}

TEST_CASE("defending_power") {
  auto p = defending_power(gap2(), {{{"u", 1.0}, {"v", 0.0}}});
  CHECK(p.at("u") == 1.0);
  CHECK(p.at("v") == 1.0);

  auto zero = defending_power(path3_iso(), {});
  for (const auto& [id, value] : zero.power) CHECK(value == 0.0);

  auto iso = defending_power(path3_iso(),
                             {{{"u1", 1.0}, {"u2", 1.0}, {"u3", 1.0}}});
  CHECK(iso.at("u1") == 1.0);
  CHECK(iso.at("u2") == 1.0);
  CHECK(iso.at("u3") == 1.0);

  CHECK_THROWS_AS(defending_power(gap2(), {{{"nope", 1.0}}}), UnknownNode);
}

TEST_CASE("attacker_gain") {
  const auto net = gap2();
  auto p1 = defending_power(net, {{{"u", 1.0}, {"v", 0.0}}});
  CHECK(attacker_gain(net, p1, "u") == 0.0);

  auto p2 = defending_power(net, {{{"u", 0.0}, {"v", 0.5}}});
  CHECK(attacker_gain(net, p2, "u") == 1.0);

  const auto iso = path3_iso();
  auto p3 = defending_power(iso, {{{"u1", 1.0}, {"u2", 1.0}, {"u3", 1.0}}});
  CHECK(attacker_gain(iso, p3, "u1") == 0.0);

  CHECK_THROWS_AS(attacker_gain(net, p1, "w"), UnknownNode);
}

TEST_CASE("threshold comparisons use the model tolerance") {
  const auto net = gap2();
  // 1 - 5e-10 counts as reaching UB_u = 1; 1 - 5e-9 does not.
  auto near = defending_power(net, {{{"u", 1.0 - 5e-10}}});
  CHECK(attacker_gain(net, near, "u") == 0.0);
  auto short_of = defending_power(net, {{{"u", 1.0 - 5e-9}}});
  CHECK(attacker_gain(net, short_of, "u") == 1.0);
  CHECK(attacker_gain(net, near, "u", 0.0) == 1.0);
}

TEST_CASE("defending_result") {
  auto r1 = defending_result(gap2(), {{{"u", 0.7}, {"v", 0.3}}});
  CHECK(r1.result == 0.0);

  auto r2 = defending_result(path3_iso(), {{{"u1", 2.0}, {"u2", 1.0}}});
  CHECK(r2.result == 10.0);
  CHECK(r2.argmax == "u3");
  CHECK(r2.gains.at("u1") == 0.0);
  CHECK(r2.gains.at("u2") == 2.0);

  auto r3 = defending_result(path3_iso(),
                             {{{"u1", 2.0}, {"u2", 2.0}, {"u3", 2.0}}});
  CHECK(r3.result == 0.0);
}

TEST_CASE("argmax ties go to the smallest id") {
  DefenseNetwork net;
  net.nodes = {{"b", 1, 1, 4, 4}, {"a", 1, 1, 4, 4}, {"c", 1, 1, 1, 1}};
  net.edges = {{"a", "b", 0.0}};
  auto r = defending_result(net, {});
  CHECK(r.result == 4.0);
  CHECK(r.argmax == "a");
  // All gains zero: still the smallest id.
  auto safe = defending_result(net, {{{"a", 1}, {"b", 1}, {"c", 1}}});
  CHECK(safe.result == 0.0);
  CHECK(safe.argmax == "a");
}

TEST_CASE("result_space and the level sets") {
  CHECK(result_space(gap2()) == std::vector<double>{0.0, 1.0});
  CHECK(result_space(path3_iso()) == std::vector<double>{0.0, 2.0, 10.0});
  DefenseNetwork flat;
  flat.nodes = {{"a", 1, 2, 0, 0}, {"b", 0, 0, 0, 0}};
  CHECK(result_space(flat) == std::vector<double>{0.0});

  CHECK(vulnerable_set(gap2(), 0.0) == std::set<std::string>{"u"});
  CHECK(crucial_set(gap2(), 0.0) == std::set<std::string>{"u"});
  CHECK(vulnerable_set(path3_iso(), 2.0) ==
        std::set<std::string>{"u1", "u3"});
  CHECK(crucial_set(path3_iso(), 2.0) == std::set<std::string>{"u1", "u3"});
  CHECK(vulnerable_set(path3_iso(), 10.0).empty());
  CHECK(crucial_set(path3_iso(), 10.0).empty());
}

TEST_CASE("model properties on random instances") {
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 150; ++trial) {
    instances::RandomParams params;
    params.seed = 1000 + trial;
    params.n = 2 + trial % 7;
    params.m = params.n - 1 + trial % 3;
    params.m = std::min(params.m, params.n * (params.n - 1) / 2);
    const auto net = instances::gen_random(params);
    const auto space = result_space(net);
    CHECK(space.size() <= 2 * net.nodes.size() + 1);

    const auto s1 = testing::random_strategy(net, rng);
    const auto s2 = testing::random_strategy(net, rng);
    DefendingStrategy sum = s1;
    for (const auto& [id, x] : s2.allocation) sum.allocation[id] += x;

    // Linearity of power in the allocation.
    const auto p1 = defending_power(net, s1);
    const auto p2 = defending_power(net, s2);
    const auto p12 = defending_power(net, sum);
    for (const auto& n : net.nodes) {
      CHECK(p12.at(n.id) ==
            doctest::Approx(p1.at(n.id) + p2.at(n.id)).epsilon(1e-12));
    }

    // sum dominates s1 pointwise, so no gain may grow.
    const auto r1 = defending_result(net, s1);
    const auto r12 = defending_result(net, sum);
    for (const auto& n : net.nodes) {
      CHECK(r12.gains.at(n.id) <= r1.gains.at(n.id));
      const double gain = r1.gains.at(n.id);
      CHECK((gain == 0.0 || gain == n.g || gain == n.g_prime));
    }
    CHECK(r12.result <= r1.result);
    CHECK(std::binary_search(space.begin(), space.end(), r1.result));
    CHECK(std::binary_search(space.begin(), space.end(), r12.result));

    // Level sets: B within A, both shrinking as alpha grows.
    std::set<std::string> prev_a, prev_b;
    bool first = true;
    for (double alpha : space) {
      const auto a = vulnerable_set(net, alpha);
      const auto b = crucial_set(net, alpha);
      CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
      if (!first) {
        CHECK(std::includes(prev_a.begin(), prev_a.end(), a.begin(), a.end()));
        CHECK(std::includes(prev_b.begin(), prev_b.end(), b.begin(), b.end()));
      }
      prev_a = a;
      prev_b = b;
      first = false;
    }
  }
}
