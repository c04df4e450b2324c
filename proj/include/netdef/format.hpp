#pragma once

#include <string>
#include <string_view>

#include "netdef/instances.hpp"
#include "netdef/model.hpp"

// Canonical JSON files.
//
//   instance:  {"resource": R,
//               "nodes": [{"id", "lb", "ub", "g", "g_prime"}, ...],
//               "edges": [{"u", "v", "w"}, ...]}
//   strategy:  {"allocation": {"<id>": r, ...}}
//   formula:   {"num_vars": p, "clauses": [[1, -2], [3], ...]}
//              (literals are 1-based, negative means negated)
//
// Unknown fields are rejected. Numbers are written in shortest round-trip
// form, so parse(serialize(x)) == x. Every parse failure throws ParseError
// naming the line or the offending field.
namespace netdef::format {

DefenseNetwork parse_instance(std::string_view text);
std::string serialize_instance(const DefenseNetwork& net);

// Node ids are not checked here; evaluating against an instance does that.
DefendingStrategy parse_strategy(std::string_view text);
std::string serialize_strategy(const DefendingStrategy& s);

instances::DnfFormula parse_formula(std::string_view text);
std::string serialize_formula(const instances::DnfFormula& f);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace netdef::format
