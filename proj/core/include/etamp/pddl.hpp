#ifndef ETAMP_PDDL_HPP
#define ETAMP_PDDL_HPP

#include <string>
#include <string_view>
#include <vector>

#include "etamp/diag.hpp"

namespace etamp {

// STRIPS subset: :strips, :typing, :negative-preconditions. Everything else
// is rejected at parse time.

struct TypedName {
  std::string name;
  std::string type = "object";
  bool operator==(const TypedName&) const = default;
};

struct PredicateDef {
  std::string name;
  std::vector<TypedName> params;
  bool operator==(const PredicateDef&) const = default;
};

// Lifted or ground literal: args are ?variables or constants.
struct Literal {
  std::string pred;
  std::vector<std::string> args;
  bool operator==(const Literal&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precon_pos;
  std::vector<Literal> precon_neg;
  std::vector<Literal> add;
  std::vector<Literal> del;
  bool operator==(const ActionSchema&) const = default;
};

struct DomainDef {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // type -> parent ("object" when unstated)
  std::vector<TypedName> constants;
  std::vector<PredicateDef> predicates;
  std::vector<ActionSchema> actions;
  bool operator==(const DomainDef&) const = default;

  const PredicateDef* find_predicate(const std::string& name) const;
  bool type_declared(const std::string& t) const;
  // true when t == ancestor or t's parent chain reaches ancestor
  bool is_subtype(const std::string& t, const std::string& ancestor) const;
};

struct ProblemDef {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;  // problem objects, excluding domain constants
  std::vector<Literal> init;       // ground positive atoms
  std::vector<Literal> goal_pos;   // ground
  std::vector<Literal> goal_neg;   // ground
  bool operator==(const ProblemDef&) const = default;
};

DomainDef parse_domain(std::string_view text, const std::string& filename = "<domain>");
ProblemDef parse_problem(std::string_view text, const DomainDef& domain,
                         const std::string& filename = "<problem>");

DomainDef parse_domain_file(const std::string& path);
ProblemDef parse_problem_file(const std::string& path, const DomainDef& domain);

// Canonical printers; output reparses to a structurally equal definition.
std::string to_pddl(const DomainDef& d);
std::string to_pddl(const ProblemDef& p);

std::string read_text_file(const std::string& path);

}  // namespace etamp

#endif
