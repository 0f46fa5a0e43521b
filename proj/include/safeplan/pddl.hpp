#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "safeplan/atom.hpp"

namespace safeplan {

/// `name - type`; used for parameters, constants and objects.
struct TypedName {
  std::string name;
  std::string type = "object";
  bool operator==(const TypedName&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  bool operator==(const PredicateDecl&) const = default;
};

/// Precondition / goal / effect-guard formula. Inside action schemas, atom
/// arguments and equality terms starting with '?' are variables.
struct Condition {
  enum class Kind { True, False, Literal, And, Or, Not, Imply, Equals };

  Kind kind = Kind::True;
  Atom atom;              // Literal
  bool positive = true;   // Literal
  std::string lhs, rhs;   // Equals
  std::vector<Condition> children;  // And, Or, Not (1), Imply (2)

  static Condition constant(bool value);
  static Condition literal(Atom atom, bool positive = true);
  static Condition conj(std::vector<Condition> children);
  static Condition disj(std::vector<Condition> children);
  static Condition negate(Condition c);
  static Condition imply(Condition antecedent, Condition consequent);
  static Condition equals(std::string lhs, std::string rhs);

  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
  std::string to_pddl() const;

  bool operator==(const Condition&) const = default;
};

/// One effect group: `add`/`del` fire when `guard` holds in the pre-state.
/// Unconditional effects carry a `true` guard.
struct Effect {
  Condition guard;
  std::vector<Atom> add;
  std::vector<Atom> del;
  bool operator==(const Effect&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Condition precondition;
  std::vector<Effect> effects;
  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  /// (type, parent) in declaration order; `object` is implicit.
  std::vector<std::pair<std::string, std::string>> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  bool has_requirement(std::string_view flag) const;
  /// True if `type` equals `ancestor` or descends from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;

  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  AtomSet init;
  Condition goal;
};

struct GroundAction {
  std::string schema;
  std::vector<std::string> args;
  Condition pre;
  std::vector<Effect> effects;

  /// Display form `name(arg1, arg2)`.
  std::string name() const;
};

struct PlanningTask {
  std::vector<PredicateDecl> predicates;
  std::vector<TypedName> objects;
  std::vector<GroundAction> actions;
  AtomSet init;
  Condition goal;

  /// Looks up a ground action by display name; accepts `name(a, b)` and
  /// `(name a b)`.
  std::optional<std::size_t> find_action(std::string_view display) const;
  /// Rebuilds the name index after `actions` changes.
  void reindex();

 private:
  std::unordered_map<std::string, std::size_t> by_name_;
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

/// Parses a standalone goal expression such as `(and (inside cup1 fridge1))`
/// against the domain and the given objects.
Condition parse_goal(std::string_view text, const Domain& domain, const std::vector<TypedName>& objects);

/// Checks objects, init atoms and goal against the domain and assembles a
/// problem. Used when the initial state comes from a scene graph.
Problem make_problem(const Domain& domain, std::string name, std::vector<TypedName> objects, AtomSet init,
                     Condition goal);

std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

/// One ground action per type-consistent binding, ordered by schema name and
/// then argument tuple. Actions whose precondition folds to false are dropped.
PlanningTask ground(const Domain& domain, const Problem& problem);

using Binding = std::map<std::string, std::string>;

/// Substitutes variables and folds equalities and constants.
Condition ground_condition(const Condition& c, const Binding& binding);

bool eval_condition(const AtomSet& state, const Condition& c);
/// Evaluates a schema-level condition under a variable binding without
/// grounding it first.
bool eval_condition(const AtomSet& state, const Condition& c, const Binding& binding);

bool applicable(const AtomSet& state, const GroundAction& action);

/// Successor state: guards are evaluated on `state`, deletes are applied
/// before adds. Throws NotApplicable when the precondition fails.
AtomSet apply(const AtomSet& state, const GroundAction& action);

}  // namespace safeplan
