#include "cli.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "netdef/errors.hpp"
#include "netdef/format.hpp"
#include "netdef/instances.hpp"
#include "netdef/solvers.hpp"

namespace netdef::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kAlgorithms{"single-threshold", "isolated",
                                           "approx", "greedy", "exact"};
const std::vector<std::string> kKinds{"integrality-gap", "greedy-hard-isolated",
                                      "greedy-hard-single", "dnf", "random"};

SolveReport run_algorithm(const std::string& name, const DefenseNetwork& net,
                          const SolveOptions& options) {
  if (name == "single-threshold") return solve_single_threshold(net, options);
  if (name == "isolated") return solve_isolated(net, options);
  if (name == "approx") return solve_approx(net, options);
  if (name == "greedy") return solve_greedy(net, options);
  if (name == "exact") return solve_exact_bruteforce(net, options);
  throw InvalidParams(fmt::format("unknown algorithm '{}'", name));
}

// Maps a library fault onto the documented exit code.
int classify(const std::exception& e) {
  if (dynamic_cast<const ModelMismatch*>(&e)) return kModelMismatch;
  if (dynamic_cast<const SizeLimit*>(&e)) return kSizeLimit;
  if (dynamic_cast<const NumericalFailure*>(&e) ||
      dynamic_cast<const RoundingInfeasible*>(&e) ||
      dynamic_cast<const UnboundedFlow*>(&e)) {
    return kSolverFailure;
  }
  return kInputError;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

DefenseNetwork load_instance(const std::string& path, std::ostream& err) {
  auto net = format::parse_instance(format::read_file(path));
  const auto violations = validate_network(net);
  if (!violations.empty()) {
    for (const auto& v : violations) {
      fmt::print(err, "error: {}: {}\n", v.code, v.message);
    }
    throw InvalidParams(fmt::format("'{}' is not a valid instance", path));
  }
  for (const auto& w : connectivity_warnings(net)) {
    fmt::print(err, "warning: {}\n", w.message);
  }
  return net;
}

ordered_json report_json(const SolveReport& r) {
  ordered_json alloc = ordered_json::object();
  for (const auto& [id, x] : r.strategy.allocation) alloc[id] = x;
  return {{"algorithm", r.algorithm},
          {"alpha", r.alpha},
          {"evaluated_result", r.evaluated_result},
          {"budget_used", r.budget_used},
          {"notes", r.notes},
          {"allocation", std::move(alloc)}};
}

// ----- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string algorithm;
  std::string output;
  int max_crucial = 20;
  bool json = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err,
              const Environment& env) {
  const auto net = load_instance(a.instance, err);
  SolveOptions options{env.tolerance, a.max_crucial};
  const auto report = run_algorithm(a.algorithm, net, options);
  if (!a.output.empty()) {
    format::write_file(a.output, format::serialize_strategy(report.strategy));
  }
  if (a.json) {
    out << report_json(report).dump(2) << "\n";
    return kOk;
  }
  fmt::print(out, "algorithm         {}\n", report.algorithm);
  fmt::print(out, "alpha             {}\n", report.alpha);
  fmt::print(out, "evaluated result  {}\n", report.evaluated_result);
  fmt::print(out, "budget used       {}\n", report.budget_used);
  fmt::print(out, "budget            {}\n", net.resource);
  fmt::print(out, "notes             {}\n", report.notes);
  return kOk;
}

// ----- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string instance;
  std::string strategy;
  bool json = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err,
                 const Environment& env) {
  const auto net = load_instance(a.instance, err);
  const auto s = format::parse_strategy(format::read_file(a.strategy));
  const auto power = defending_power(net, s);
  const auto report = defending_result(net, s, env.tolerance);
  if (a.json) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : net.nodes) {
      nodes.push_back({{"id", n.id},
                       {"allocation", s.at(n.id)},
                       {"power", power.at(n.id)},
                       {"gain", report.gains.at(n.id)}});
    }
    ordered_json doc{{"nodes", std::move(nodes)},
                     {"result", report.result},
                     {"argmax", report.argmax},
                     {"allocated", s.total()},
                     {"budget", net.resource}};
    out << doc.dump(2) << "\n";
    return kOk;
  }
  std::size_t width = 4;
  for (const auto& n : net.nodes) width = std::max(width, n.id.size());
  fmt::print(out, "{:<{}}  {:>12}  {:>12}  {:>12}\n", "node", width,
             "allocation", "power", "gain");
  for (const auto& n : net.nodes) {
    fmt::print(out, "{:<{}}  {:>12.6g}  {:>12.6g}  {:>12.6g}\n", n.id, width,
               s.at(n.id), power.at(n.id), report.gains.at(n.id));
  }
  fmt::print(out, "result     {}\n", report.result);
  fmt::print(out, "argmax     {}\n", report.argmax);
  fmt::print(out, "allocated  {}\n", s.total());
  fmt::print(out, "budget     {}\n", net.resource);
  if (s.total() > net.resource + env.tolerance) {
    fmt::print(err, "warning: strategy allocates {} above the budget {}\n",
               s.total(), net.resource);
  }
  return kOk;
}

// ----- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::string output;
  std::string formula;
  std::optional<int> t;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> resource;
  bool isolated = false;
  bool single_threshold = false;
};

void check_generate_flags(const GenerateArgs& a) {
  if (a.kind == "dnf" && (a.formula.empty() || !a.t)) {
    throw InvalidParams("--kind dnf needs --formula and --t");
  }
  if (a.kind == "random" && (!a.seed || !a.n || !a.m)) {
    throw InvalidParams("--kind random needs --seed, --n and --m");
  }
  if (a.kind != "random" &&
      (a.seed || a.n || a.m || a.resource || a.isolated ||
       a.single_threshold)) {
    throw InvalidParams("--seed/--n/--m/--resource/--isolated/"
                        "--single-threshold only apply to --kind random");
  }
  if (a.kind != "dnf" && (!a.formula.empty() || a.t)) {
    throw InvalidParams("--formula/--t only apply to --kind dnf");
  }
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  check_generate_flags(a);
  DefenseNetwork net;
  if (a.kind == "integrality-gap") {
    net = instances::gen_integrality_gap();
  } else if (a.kind == "greedy-hard-isolated") {
    net = instances::gen_greedy_hard(instances::GreedyHardKind::kIsolated);
  } else if (a.kind == "greedy-hard-single") {
    net = instances::gen_greedy_hard(
        instances::GreedyHardKind::kSingleThreshold);
  } else if (a.kind == "dnf") {
    const auto f = format::parse_formula(format::read_file(a.formula));
    net = instances::gen_dnf_reduction(f, *a.t);
  } else {
    instances::RandomParams params;
    params.seed = *a.seed;
    params.n = *a.n;
    params.m = *a.m;
    params.resource = a.resource;
    params.isolated = a.isolated;
    params.single_threshold = a.single_threshold;
    net = instances::gen_random(params);
  }
  format::write_file(a.output, format::serialize_instance(net));
  fmt::print(out, "wrote {}: {} nodes, {} edges, resource {}\n", a.output,
             net.nodes.size(), net.edges.size(), net.resource);
  return kOk;
}

// ----- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string instance;
  std::string algorithms;
  std::string budget_scale = "1";
  int max_crucial = 20;
  bool json = false;
};

struct CompareRow {
  std::string algorithm;
  double scale = 1.0;
  double budget = 0.0;
  std::optional<SolveReport> report;
  std::string status = "ok";
  int code = kOk;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err,
                const Environment& env) {
  const auto names = split_csv(a.algorithms);
  if (names.empty()) throw InvalidParams("--algorithms is empty");
  for (const auto& name : names) {
    if (std::find(kAlgorithms.begin(), kAlgorithms.end(), name) ==
        kAlgorithms.end()) {
      throw InvalidParams(fmt::format("unknown algorithm '{}'", name));
    }
  }
  std::vector<double> scales;
  for (const auto& part : split_csv(a.budget_scale)) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || !(value >= 0.0)) {
      throw InvalidParams(fmt::format("bad budget scale '{}'", part));
    }
    scales.push_back(value);
  }
  if (scales.empty()) throw InvalidParams("--budget-scale is empty");

  const auto net = load_instance(a.instance, err);
  const SolveOptions options{env.tolerance, a.max_crucial};
  std::vector<CompareRow> rows;
  int exit_code = kOk;
  for (const auto& name : names) {
    for (double scale : scales) {
      CompareRow row{name, scale, net.resource * scale, std::nullopt};
      DefenseNetwork scaled = net;
      scaled.resource = row.budget;
      try {
        row.report = run_algorithm(name, scaled, options);
      } catch (const Error& e) {
        row.code = classify(e);
        if (row.code == kModelMismatch) {
          row.status = "skipped: model mismatch";
          fmt::print(err, "notice: {} skipped: {}\n", name, e.what());
        } else {
          row.status = row.code == kSizeLimit ? "failed: size limit"
                                              : "failed: solver error";
          fmt::print(err, "error: {} at scale {}: {}\n", name, scale,
                     e.what());
          if (exit_code == kOk) exit_code = row.code;
        }
      }
      rows.push_back(std::move(row));
    }
  }

  if (a.json) {
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json item{{"algorithm", row.algorithm},
                        {"scale", row.scale},
                        {"budget", row.budget},
                        {"status", row.status}};
      if (row.report) {
        item["alpha"] = row.report->alpha;
        item["evaluated_result"] = row.report->evaluated_result;
        item["budget_used"] = row.report->budget_used;
      }
      list.push_back(std::move(item));
    }
    out << ordered_json{{"rows", std::move(list)}}.dump(2) << "\n";
    return exit_code;
  }

  fmt::print(out, "{:<17} {:>6} {:>12} {:>12} {:>12} {:>12}  {}\n",
             "algorithm", "scale", "budget", "alpha", "result", "used",
             "status");
  for (const auto& row : rows) {
    if (row.report) {
      fmt::print(out, "{:<17} {:>6} {:>12.6g} {:>12.6g} {:>12.6g} {:>12.6g}  "
                      "{}\n",
                 row.algorithm, row.scale, row.budget, row.report->alpha,
                 row.report->evaluated_result, row.report->budget_used,
                 row.status);
    } else {
      fmt::print(out, "{:<17} {:>6} {:>12.6g} {:>12} {:>12} {:>12}  {}\n",
                 row.algorithm, row.scale, row.budget, "-", "-", "-",
                 row.status);
    }
  }
  return exit_code;
}

}  // namespace

Environment environment_from_process() {
  Environment env;
  if (const char* raw = std::getenv("NETDEF_TOLERANCE")) {
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(value >= 0.0)) {
      env.error = fmt::format("NETDEF_TOLERANCE='{}' is not a nonnegative "
                              "number",
                              raw);
    } else {
      env.tolerance = value;
    }
  }
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const Environment& env) {
  CLI::App app{"Network defending solver"};
  app.name("netdef");
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("--instance", solve_args.instance, "Instance file")
      ->required();
  solve->add_option("--algorithm", solve_args.algorithm, "Algorithm")
      ->required()
      ->check(CLI::IsMember(kAlgorithms));
  solve->add_option("--output", solve_args.output, "Write the strategy here");
  solve->add_option("--max-crucial", solve_args.max_crucial,
                    "Crucial-set limit for the exact solver")
      ->check(CLI::Range(0, 62));
  solve->add_flag("--json", solve_args.json, "Emit JSON");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a strategy");
  evaluate->add_option("--instance", eval_args.instance, "Instance file")
      ->required();
  evaluate->add_option("--strategy", eval_args.strategy, "Strategy file")
      ->required();
  evaluate->add_flag("--json", eval_args.json, "Emit JSON");

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Generate an instance");
  generate->add_option("--kind", gen_args.kind, "Instance family")
      ->required()
      ->check(CLI::IsMember(kKinds));
  generate->add_option("--output", gen_args.output, "Instance file to write")
      ->required();
  generate->add_option("--formula", gen_args.formula, "DNF formula file");
  generate->add_option("--t", gen_args.t, "Clause target for dnf");
  generate->add_option("--seed", gen_args.seed, "Random seed");
  generate->add_option("--n", gen_args.n, "Node count");
  generate->add_option("--m", gen_args.m, "Edge count");
  generate->add_option("--resource", gen_args.resource,
                       "Fixed budget for random instances");
  generate->add_flag("--isolated", gen_args.isolated, "Zero edge weights");
  generate->add_flag("--single-threshold", gen_args.single_threshold,
                     "Force ub = lb");

  CompareArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "Compare algorithms");
  compare->add_option("--instance", cmp_args.instance, "Instance file")
      ->required();
  compare->add_option("--algorithms", cmp_args.algorithms,
                      "Comma-separated algorithm names")
      ->required();
  compare->add_option("--budget-scale", cmp_args.budget_scale,
                      "Comma-separated budget multipliers");
  compare->add_option("--max-crucial", cmp_args.max_crucial,
                      "Crucial-set limit for the exact solver")
      ->check(CLI::Range(0, 62));
  compare->add_flag("--json", cmp_args.json, "Emit JSON");

  std::vector<std::string> argv_storage{"netdef"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests carry exit code 0; everything else is a flag error.
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kOk : kInputError;
  }
  if (!env.error.empty()) {
    fmt::print(err, "error: {}\n", env.error);
    return kInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args, out, err, env);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, out, err, env);
    if (generate->parsed()) return cmd_generate(gen_args, out);
    if (compare->parsed()) return cmd_compare(cmp_args, out, err, env);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return classify(e);
  }
  return kInputError;
}

}  // namespace netdef::cli
