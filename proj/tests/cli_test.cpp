#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "netdef/format.hpp"
#include "netdef/instances.hpp"
#include "netdef/model.hpp"

#include <sys/wait.h>
#include <unistd.h>

using namespace netdef;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, cli::Environment env = {}) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// Scratch directory holding the fixture files, removed on exit.
class Workspace {
 public:
  Workspace() {
    dir_ = fs::temp_directory_path() /
           ("netdef_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    put("gap.json", format::serialize_instance(instances::gen_integrality_gap()));
    put("iso.json", format::serialize_instance(instances::gen_greedy_hard(
                        instances::GreedyHardKind::kIsolated)));
    put("st.json", format::serialize_instance(instances::gen_greedy_hard(
                       instances::GreedyHardKind::kSingleThreshold)));
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string put(const std::string& name, const std::string& text) const {
    format::write_file(path(name), text);
    return path(name);
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("solve") {
  Workspace ws;
  auto r = run({"solve", "--instance", ws.path("gap.json"), "--algorithm", "exact"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "alpha             0\n"));
  CHECK(r.err.empty());

  r = run({"solve", "--instance", ws.path("gap.json"), "--algorithm", "isolated"});
  CHECK(r.code == cli::kModelMismatch);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "w == 0"));

  r = run({"solve", "--instance", ws.path("iso.json"), "--algorithm", "greedy"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "alpha             10\n"));

  r = run({"solve", "--instance", ws.path("iso.json"), "--algorithm", "exact",
           "--max-crucial", "1"});
  CHECK(r.code == cli::kSizeLimit);

  r = run({"solve", "--instance", ws.path("st.json"), "--algorithm",
           "single-threshold", "--json"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"alpha\": 0.0"));
}

TEST_CASE("solve then evaluate reproduces the result") {
  Workspace ws;
  for (const std::string algorithm :
       {"exact", "approx", "greedy", "isolated"}) {
    const auto instance = ws.path("iso.json");
    const auto strategy = ws.path(algorithm + ".strategy.json");
    auto solved = run({"solve", "--instance", instance, "--algorithm", algorithm,
                       "--output", strategy, "--json"});
    REQUIRE(solved.code == 0);
    auto evaluated = run({"evaluate", "--instance", instance, "--strategy",
                          strategy, "--json"});
    REQUIRE(evaluated.code == 0);
    // Both carry "result"-like fields in shortest round-trip form.
    const auto pick = [](const std::string& text, const std::string& key) {
      const auto at = text.find("\"" + key + "\": ");
      REQUIRE(at != std::string::npos);
      const auto start = at + key.size() + 4;
      return text.substr(start, text.find_first_of(",\n", start) - start);
    };
    CAPTURE(algorithm);
    CHECK(pick(solved.out, "evaluated_result") == pick(evaluated.out, "result"));
  }
}

TEST_CASE("evaluate") {
  Workspace ws;
  const auto gap = ws.path("gap.json");
  auto r = run({"evaluate", "--instance", gap, "--strategy",
                ws.put("a.json", R"({"allocation": {"u": 1}})")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "result     0\n"));

  r = run({"evaluate", "--instance", gap, "--strategy",
           ws.put("b.json", R"({"allocation": {"v": 0.5}})")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "result     1\n"));
  CHECK(contains(r.out, "argmax     u\n"));

  r = run({"evaluate", "--instance", gap, "--strategy",
           ws.put("c.json", R"({"allocation": {"nope": 0.5}})")});
  CHECK(r.code == cli::kInputError);
  CHECK(contains(r.err, "nope"));

  DefenseNetwork safe = instances::gen_integrality_gap();
  for (auto& n : safe.nodes) n.lb = n.ub = 0.0;
  r = run({"evaluate", "--instance",
           ws.put("safe.json", format::serialize_instance(safe)), "--strategy",
           ws.put("empty.json", R"({"allocation": {}})")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "result     0\n"));
}

TEST_CASE("generate") {
  Workspace ws;
  auto r = run({"generate", "--kind", "integrality-gap", "--output",
                ws.path("g.json")});
  REQUIRE(r.code == 0);
  const auto gap = format::parse_instance(format::read_file(ws.path("g.json")));
  CHECK(gap.nodes.size() == 2);
  CHECK(gap.resource == 1.0);

  const auto formula =
      ws.put("f.json", R"({"num_vars": 2, "clauses": [[1, 2], [-1]]})");
  r = run({"generate", "--kind", "dnf", "--formula", formula, "--t", "1",
           "--output", ws.path("d.json")});
  REQUIRE(r.code == 0);
  const auto dnf = format::parse_instance(format::read_file(ws.path("d.json")));
  CHECK(dnf.nodes.size() == 9);
  CHECK(dnf.resource == 2.5);

  r = run({"generate", "--kind", "dnf", "--formula", formula, "--t", "5",
           "--output", ws.path("bad.json")});
  CHECK(r.code == cli::kInputError);
  CHECK_FALSE(fs::exists(ws.path("bad.json")));

  for (const char* name : {"r1.json", "r2.json"}) {
    r = run({"generate", "--kind", "random", "--seed", "7", "--n", "5", "--m",
             "6", "--output", ws.path(name)});
    REQUIRE(r.code == 0);
  }
  CHECK(format::read_file(ws.path("r1.json")) ==
        format::read_file(ws.path("r2.json")));

  r = run({"generate", "--kind", "random", "--n", "5", "--m", "6", "--output",
           ws.path("noseed.json")});
  CHECK(r.code == cli::kInputError);
  r = run({"generate", "--kind", "random", "--seed", "1", "--n", "5", "--m",
           "2", "--output", ws.path("sparse.json")});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("compare") {
  Workspace ws;
  auto r = run({"compare", "--instance", ws.path("gap.json"), "--algorithms",
                "exact,approx", "--budget-scale", "0.5,1.0", "--json"});
  REQUIRE(r.code == 0);
  // Rows are ordered algorithm-major, then by scale.
  const auto exact_half = r.out.find("\"algorithm\": \"exact\"");
  REQUIRE(exact_half != std::string::npos);
  CHECK(contains(r.out.substr(exact_half, 200), "\"alpha\": 1.0"));
  const auto approx_full = r.out.rfind("\"algorithm\": \"approx\"");
  CHECK(contains(r.out.substr(approx_full, 200), "\"alpha\": 0.0"));

  r = run({"compare", "--instance", ws.path("iso.json"), "--algorithms",
           "greedy,isolated"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "greedy                 1            3           10"));
  CHECK(contains(r.out, "isolated               1            3            0"));

  r = run({"compare", "--instance", ws.path("iso.json"), "--algorithms",
           "greedy,single-threshold"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "skipped: model mismatch"));
  CHECK(contains(r.err, "single-threshold"));

  // Flags are checked before the (missing) instance is read.
  r = run({"compare", "--instance", ws.path("missing.json"), "--algorithms",
           "exact,bogus"});
  CHECK(r.code == cli::kInputError);
  CHECK(contains(r.err, "bogus"));
  r = run({"compare", "--instance", ws.path("gap.json"), "--algorithms",
           "exact", "--budget-scale", "-1"});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("input errors") {
  Workspace ws;
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"solve", "--instance", ws.path("gap.json"), "--algorithm",
             "magic"}).code == cli::kInputError);
  CHECK(run({"solve", "--instance", ws.path("missing.json"), "--algorithm",
             "exact"}).code == cli::kInputError);
  const auto broken = ws.put("broken.json", "{\"resource\": 1,");
  auto r = run({"solve", "--instance", broken, "--algorithm", "exact"});
  CHECK(r.code == cli::kInputError);
  CHECK(r.out.empty());

  DefenseNetwork invalid = instances::gen_integrality_gap();
  invalid.nodes[0].lb = 5.0;
  r = run({"solve", "--instance",
           ws.put("invalid.json", format::serialize_instance(invalid)),
           "--algorithm", "exact"});
  CHECK(r.code == cli::kInputError);
  CHECK(contains(r.err, "lb>ub"));

  cli::Environment env;
  env.error = "NETDEF_TOLERANCE: not a number";
  CHECK(run({"solve", "--instance", ws.path("gap.json"), "--algorithm",
             "exact"}, env).code == cli::kInputError);
}

TEST_CASE("installed binary") {
  Workspace ws;
  const std::string tool = NETDEF_TOOL_PATH;
  const auto status = [&](const std::string& args) {
    const std::string command =
        "\"" + tool + "\" " + args + " > /dev/null 2>&1";
    const int raw = std::system(command.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("solve --instance \"" + ws.path("gap.json") +
               "\" --algorithm exact") == 0);
  CHECK(status("solve --instance \"" + ws.path("gap.json") +
               "\" --algorithm isolated") == cli::kModelMismatch);
  CHECK(status("compare --instance \"" + ws.path("gap.json") +
               "\" --algorithms nope") == cli::kInputError);
  const std::string env_bad = "NETDEF_TOLERANCE=abc \"" + tool +
                              "\" solve --instance \"" + ws.path("gap.json") +
                              "\" --algorithm exact > /dev/null 2>&1";
  const int raw = std::system(env_bad.c_str());
  CHECK(WIFEXITED(raw));
  CHECK(WEXITSTATUS(raw) == cli::kInputError);
}
