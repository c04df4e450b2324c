#include "netdef/format.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "netdef/errors.hpp"

namespace netdef::format {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) line += text[i] == '\n';
    throw ParseError(fmt::format("line {}: malformed JSON ({})", line,
                                 e.what()));
  }
}

void expect_object(const json& j, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ParseError(fmt::format("{}: expected an object", where));
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || item.key() == name;
    if (!known) {
      throw ParseError(fmt::format("{}: unknown field '{}'", where,
                                   item.key()));
    }
  }
}

const json& field(const json& j, const std::string& where, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError(fmt::format("{}: missing field '{}'", where, name));
  }
  return *it;
}

double number(const json& j, const std::string& where, const char* name) {
  const json& v = field(j, where, name);
  if (!v.is_number()) {
    throw ParseError(fmt::format("{}.{}: expected a number", where, name));
  }
  return v.get<double>();
}

std::string text_field(const json& j, const std::string& where,
                       const char* name) {
  const json& v = field(j, where, name);
  if (!v.is_string()) {
    throw ParseError(fmt::format("{}.{}: expected a string", where, name));
  }
  return v.get<std::string>();
}

const json& array_field(const json& j, const std::string& where,
                        const char* name) {
  const json& v = field(j, where, name);
  if (!v.is_array()) {
    throw ParseError(fmt::format("{}.{}: expected an array", where, name));
  }
  return v;
}

}  // namespace

DefenseNetwork parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  expect_object(doc, "instance", {"resource", "nodes", "edges"});
  DefenseNetwork net;
  net.resource = number(doc, "instance", "resource");
  const json& nodes = array_field(doc, "instance", "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = fmt::format("nodes[{}]", i);
    expect_object(nodes[i], where, {"id", "lb", "ub", "g", "g_prime"});
    net.nodes.push_back({text_field(nodes[i], where, "id"),
                         number(nodes[i], where, "lb"),
                         number(nodes[i], where, "ub"),
                         number(nodes[i], where, "g"),
                         number(nodes[i], where, "g_prime")});
  }
  const json& edges = array_field(doc, "instance", "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = fmt::format("edges[{}]", i);
    expect_object(edges[i], where, {"u", "v", "w"});
    net.edges.push_back({text_field(edges[i], where, "u"),
                         text_field(edges[i], where, "v"),
                         number(edges[i], where, "w")});
  }
  return net;
}

std::string serialize_instance(const DefenseNetwork& net) {
  ordered_json doc;
  doc["resource"] = net.resource;
  doc["nodes"] = ordered_json::array();
  for (const auto& n : net.nodes) {
    doc["nodes"].push_back({{"id", n.id},
                            {"lb", n.lb},
                            {"ub", n.ub},
                            {"g", n.g},
                            {"g_prime", n.g_prime}});
  }
  doc["edges"] = ordered_json::array();
  for (const auto& e : net.edges) {
    doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  }
  return doc.dump(2) + "\n";
}

DefendingStrategy parse_strategy(std::string_view text) {
  const json doc = parse_json(text);
  expect_object(doc, "strategy", {"allocation"});
  const json& alloc = field(doc, "strategy", "allocation");
  if (!alloc.is_object()) {
    throw ParseError("strategy.allocation: expected an object");
  }
  DefendingStrategy s;
  for (const auto& item : alloc.items()) {
    if (!item.value().is_number()) {
      throw ParseError(fmt::format("allocation.{}: expected a number",
                                   item.key()));
    }
    const double r = item.value().get<double>();
    if (r < 0.0) {
      throw ParseError(fmt::format("allocation.{}: negative amount {}",
                                   item.key(), r));
    }
    s.allocation[item.key()] = r;
  }
  return s;
}

std::string serialize_strategy(const DefendingStrategy& s) {
  ordered_json alloc = ordered_json::object();
  for (const auto& [id, r] : s.allocation) alloc[id] = r;
  ordered_json doc;
  doc["allocation"] = std::move(alloc);
  return doc.dump(2) + "\n";
}

instances::DnfFormula parse_formula(std::string_view text) {
  const json doc = parse_json(text);
  expect_object(doc, "formula", {"num_vars", "clauses"});
  const json& p = field(doc, "formula", "num_vars");
  if (!p.is_number_integer()) {
    throw ParseError("formula.num_vars: expected an integer");
  }
  instances::DnfFormula f;
  f.num_vars = p.get<int>();
  const json& clauses = array_field(doc, "formula", "clauses");
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    if (!clauses[j].is_array()) {
      throw ParseError(fmt::format("clauses[{}]: expected an array", j));
    }
    std::vector<instances::Literal> clause;
    for (const auto& lit : clauses[j]) {
      if (!lit.is_number_integer() || lit.get<long long>() == 0) {
        throw ParseError(fmt::format(
            "clauses[{}]: literals are nonzero integers", j));
      }
      const long long v = lit.get<long long>();
      clause.push_back({static_cast<int>(std::llabs(v) - 1), v < 0});
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

std::string serialize_formula(const instances::DnfFormula& f) {
  ordered_json doc;
  doc["num_vars"] = f.num_vars;
  doc["clauses"] = ordered_json::array();
  for (const auto& clause : f.clauses) {
    ordered_json lits = ordered_json::array();
    for (const auto& lit : clause) {
      lits.push_back(lit.negated ? -(lit.var + 1) : lit.var + 1);
    }
    doc["clauses"].push_back(std::move(lits));
  }
  return doc.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  out << contents;
  if (!out) throw Error(fmt::format("failed writing '{}'", path));
}

}  // namespace netdef::format
