#include "safeplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_set>

#include "safeplan/error.hpp"

namespace safeplan {

// ---------------------------------------------------------------------------
// S-expressions

namespace {

struct SExpr {
  bool is_list = false;
  std::string word;
  std::vector<SExpr> items;
  std::size_t offset = 0;

  bool is_word() const { return !is_list; }
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip();
    if (pos_ >= text_.size()) throw PddlSyntaxError(pos_, "empty input");
    SExpr e = read();
    skip();
    if (pos_ < text_.size()) throw PddlSyntaxError(pos_, "trailing content after top-level expression");
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) throw PddlSyntaxError(pos_, "unexpected end of input");
    SExpr e;
    e.offset = pos_;
    if (text_[pos_] == ')') throw PddlSyntaxError(pos_, "unexpected ')'");
    if (text_[pos_] == '(') {
      e.is_list = true;
      ++pos_;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw PddlSyntaxError(e.offset, "unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    e.word = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_keyword(const SExpr& e, std::string_view kw) { return e.is_word() && lower(e.word) == kw; }

const std::string& expect_word(const SExpr& e, const char* what) {
  if (!e.is_word()) throw PddlSyntaxError(e.offset, std::string("expected ") + what);
  return e.word;
}

bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

void check_name(const SExpr& e, const char* what) {
  const auto& w = expect_word(e, what);
  std::string_view body = w;
  if (is_variable(body)) body.remove_prefix(1);
  if (!is_identifier(body)) throw PddlSyntaxError(e.offset, std::string("invalid ") + what + " '" + w + "'");
}

// `a b - t c` -> [(a,t), (b,t), (c,object)]
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin, const char* what) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& e = items[i];
    if (e.is_word() && e.word == "-") {
      if (i + 1 >= items.size()) throw PddlSyntaxError(e.offset, "missing type after '-'");
      const SExpr& t = items[i + 1];
      if (t.is_list) {
        if (!t.items.empty() && is_keyword(t.items[0], "either"))
          throw PddlSyntaxError(t.offset, "either-types are not supported");
        throw PddlSyntaxError(t.offset, "expected type name");
      }
      check_name(t, "type name");
      if (pending == 0) throw PddlSyntaxError(e.offset, "type without names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = t.word;
      pending = 0;
      ++i;
      continue;
    }
    check_name(e, what);
    out.push_back({e.word, "object"});
    ++pending;
  }
  return out;
}

const std::set<std::string>& supported_requirements() {
  static const std::set<std::string> s{":strips",   ":typing",             ":negative-preconditions",
                                       ":equality", ":conditional-effects", ":disjunctive-preconditions",
                                       ":adl"};
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conditions

Condition Condition::constant(bool value) {
  Condition c;
  c.kind = value ? Kind::True : Kind::False;
  return c;
}

Condition Condition::literal(Atom atom, bool positive) {
  Condition c;
  c.kind = Kind::Literal;
  c.atom = std::move(atom);
  c.positive = positive;
  return c;
}

Condition Condition::conj(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::And;
  c.children = std::move(children);
  return c;
}

Condition Condition::disj(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::Or;
  c.children = std::move(children);
  return c;
}

Condition Condition::negate(Condition inner) {
  Condition c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(inner));
  return c;
}

Condition Condition::imply(Condition antecedent, Condition consequent) {
  Condition c;
  c.kind = Kind::Imply;
  c.children.push_back(std::move(antecedent));
  c.children.push_back(std::move(consequent));
  return c;
}

Condition Condition::equals(std::string lhs, std::string rhs) {
  Condition c;
  c.kind = Kind::Equals;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

namespace {

std::string atom_pddl(const Atom& a) {
  std::string out = "(" + a.predicate();
  for (const auto& x : a.args()) out += " " + x;
  return out + ")";
}

}  // namespace

std::string Condition::to_pddl() const {
  auto join = [&](const char* head) {
    std::string out = std::string("(") + head;
    for (const auto& c : children) out += " " + c.to_pddl();
    return out + ")";
  };
  switch (kind) {
    case Kind::True: return "(and)";
    case Kind::False: return "(or)";
    case Kind::Literal: return positive ? atom_pddl(atom) : "(not " + atom_pddl(atom) + ")";
    case Kind::And: return join("and");
    case Kind::Or: return join("or");
    case Kind::Not: return join("not");
    case Kind::Imply: return join("imply");
    case Kind::Equals: return "(= " + lhs + " " + rhs + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Domain queries

bool Domain::has_requirement(std::string_view flag) const {
  return std::find(requirements.begin(), requirements.end(), flag) != requirements.end();
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string current(type);
  for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
    if (current == ancestor) return true;
    if (current == "object") return false;
    auto it = std::find_if(types.begin(), types.end(), [&](const auto& t) { return t.first == current; });
    if (it == types.end()) return false;
    current = it->second;
  }
  return false;
}

const PredicateDecl* Domain::find_predicate(std::string_view name) const {
  auto it = std::find_if(predicates.begin(), predicates.end(), [&](const auto& p) { return p.name == name; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* Domain::find_action(std::string_view name) const {
  auto it = std::find_if(actions.begin(), actions.end(), [&](const auto& a) { return a.name == name; });
  return it == actions.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

// Which connectives the requirement flags allow.
struct Allowed {
  bool negation = false;
  bool disjunction = false;
  bool equality = false;
  bool conditional = false;

  explicit Allowed(const Domain& d) {
    const bool adl = d.has_requirement(":adl");
    negation = adl || d.has_requirement(":negative-preconditions");
    disjunction = adl || d.has_requirement(":disjunctive-preconditions");
    equality = adl || d.has_requirement(":equality");
    conditional = adl || d.has_requirement(":conditional-effects");
  }
};

// Names visible while parsing a condition: variables with their types, plus
// constants/objects with theirs.
struct Scope {
  const Domain& domain;
  std::unordered_map<std::string, std::string> terms;
};

void add_terms(Scope& scope, const std::vector<TypedName>& names) {
  for (const auto& n : names) scope.terms[n.name] = n.type;
}

Atom parse_literal_atom(const SExpr& e, const Scope& scope) {
  if (!e.is_list || e.items.empty()) throw PddlSyntaxError(e.offset, "expected atom");
  const auto& pred = expect_word(e.items[0], "predicate name");
  const PredicateDecl* decl = scope.domain.find_predicate(pred);
  if (!decl) throw PddlValidationError("undeclared predicate '" + pred + "'");
  if (decl->params.size() + 1 != e.items.size())
    throw PddlValidationError("predicate '" + pred + "' expects " + std::to_string(decl->params.size()) +
                              " arguments, got " + std::to_string(e.items.size() - 1));
  std::vector<std::string> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const auto& term = expect_word(e.items[i], "term");
    auto it = scope.terms.find(term);
    if (it == scope.terms.end()) {
      throw PddlValidationError(is_variable(term) ? "unbound variable '" + term + "' in '" + pred + "'"
                                                  : "undeclared object '" + term + "' in '" + pred + "'");
    }
    const std::string& want = decl->params[i - 1].type;
    const bool ok = is_variable(term)
                        ? scope.domain.is_subtype(it->second, want) || scope.domain.is_subtype(want, it->second)
                        : scope.domain.is_subtype(it->second, want);
    if (!ok)
      throw PddlValidationError("type mismatch: '" + term + "' of type " + it->second + " used as " + want +
                                " in '" + pred + "'");
    args.push_back(term);
  }
  return Atom(pred, std::move(args));
}

std::string parse_term(const SExpr& e, const Scope& scope) {
  const auto& t = expect_word(e, "term");
  if (!scope.terms.count(t))
    throw PddlValidationError(is_variable(t) ? "unbound variable '" + t + "'" : "undeclared object '" + t + "'");
  return t;
}

Condition parse_condition(const SExpr& e, const Scope& scope, const Allowed& allowed) {
  if (!e.is_list) throw PddlSyntaxError(e.offset, "expected condition");
  if (e.items.empty()) return Condition::conj({});
  const SExpr& head = e.items[0];
  if (head.is_word()) {
    const std::string kw = lower(head.word);
    if (kw == "and" || kw == "or") {
      if (kw == "or" && !allowed.disjunction)
        throw PddlValidationError("'or' requires :disjunctive-preconditions");
      std::vector<Condition> kids;
      for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(parse_condition(e.items[i], scope, allowed));
      return kw == "and" ? Condition::conj(std::move(kids)) : Condition::disj(std::move(kids));
    }
    if (kw == "not") {
      if (e.items.size() != 2) throw PddlSyntaxError(e.offset, "'not' takes one argument");
      if (!allowed.negation) throw PddlValidationError("'not' in a condition requires :negative-preconditions");
      const SExpr& inner = e.items[1];
      if (inner.is_list && !inner.items.empty() && inner.items[0].is_word()) {
        const std::string ikw = lower(inner.items[0].word);
        const bool connective =
            ikw == "and" || ikw == "or" || ikw == "not" || ikw == "imply" || ikw == "=" || ikw == "forall" ||
            ikw == "exists";
        if (!connective) return Condition::literal(parse_literal_atom(inner, scope), false);
      }
      return Condition::negate(parse_condition(inner, scope, allowed));
    }
    if (kw == "imply") {
      if (e.items.size() != 3) throw PddlSyntaxError(e.offset, "'imply' takes two arguments");
      if (!allowed.disjunction) throw PddlValidationError("'imply' requires :disjunctive-preconditions");
      return Condition::imply(parse_condition(e.items[1], scope, allowed),
                              parse_condition(e.items[2], scope, allowed));
    }
    if (kw == "=") {
      if (e.items.size() != 3) throw PddlSyntaxError(e.offset, "'=' takes two arguments");
      if (e.items[1].is_list || e.items[2].is_list)
        throw UnsupportedRequirement(":numeric-fluents");
      if (!allowed.equality) throw PddlValidationError("'=' requires :equality");
      return Condition::equals(parse_term(e.items[1], scope), parse_term(e.items[2], scope));
    }
    if (kw == "forall" || kw == "exists") throw PddlSyntaxError(e.offset, "quantified conditions are not supported");
    if (kw == "<" || kw == ">" || kw == "<=" || kw == ">=") throw UnsupportedRequirement(":numeric-fluents");
  }
  return Condition::literal(parse_literal_atom(e, scope));
}

void add_effect_literal(const SExpr& e, const Scope& scope, Effect& group) {
  if (!e.is_list || e.items.empty()) throw PddlSyntaxError(e.offset, "expected effect literal");
  const SExpr& head = e.items[0];
  if (head.is_word()) {
    const std::string kw = lower(head.word);
    if (kw == "not") {
      if (e.items.size() != 2) throw PddlSyntaxError(e.offset, "'not' takes one argument");
      group.del.push_back(parse_literal_atom(e.items[1], scope));
      return;
    }
    if (kw == "increase" || kw == "decrease" || kw == "assign" || kw == "scale-up" || kw == "scale-down")
      throw UnsupportedRequirement(":numeric-fluents");
    if (kw == "forall") throw PddlSyntaxError(e.offset, "universal effects are not supported");
    if (kw == "when" || kw == "and") throw PddlSyntaxError(e.offset, "nested '" + kw + "' in effect");
  }
  group.add.push_back(parse_literal_atom(e, scope));
}

void check_effect_group(const Effect& g, const std::string& action) {
  for (const auto& a : g.add) {
    if (std::find(g.del.begin(), g.del.end(), a) != g.del.end())
      throw PddlValidationError("action '" + action + "' both adds and deletes " + a.to_string() +
                                " under the same condition");
  }
}

std::vector<Effect> parse_effects(const SExpr& e, const Scope& scope, const Allowed& allowed,
                                  const std::string& action) {
  Effect plain;
  std::vector<Effect> conditional;
  std::function<void(const SExpr&)> walk = [&](const SExpr& x) {
    if (!x.is_list) throw PddlSyntaxError(x.offset, "expected effect");
    if (x.items.empty()) return;
    if (is_keyword(x.items[0], "and")) {
      for (std::size_t i = 1; i < x.items.size(); ++i) walk(x.items[i]);
      return;
    }
    if (is_keyword(x.items[0], "when")) {
      if (!allowed.conditional) throw PddlValidationError("'when' requires :conditional-effects");
      if (x.items.size() != 3) throw PddlSyntaxError(x.offset, "'when' takes a condition and an effect");
      Effect g;
      g.guard = parse_condition(x.items[1], scope, allowed);
      const SExpr& body = x.items[2];
      if (body.is_list && !body.items.empty() && is_keyword(body.items[0], "and")) {
        for (std::size_t i = 1; i < body.items.size(); ++i) add_effect_literal(body.items[i], scope, g);
      } else {
        add_effect_literal(body, scope, g);
      }
      check_effect_group(g, action);
      conditional.push_back(std::move(g));
      return;
    }
    add_effect_literal(x, scope, plain);
  };
  walk(e);
  check_effect_group(plain, action);
  std::vector<Effect> out;
  if (!plain.add.empty() || !plain.del.empty()) out.push_back(std::move(plain));
  for (auto& g : conditional) out.push_back(std::move(g));
  return out;
}

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw PddlValidationError(std::string("duplicate ") + what + " '" + n + "'");
  }
}

void check_type_declared(const Domain& d, const std::string& type) {
  if (type == "object") return;
  if (std::none_of(d.types.begin(), d.types.end(), [&](const auto& t) { return t.first == type; }))
    throw PddlValidationError("undeclared type '" + type + "'");
}

// `(define (<kind> name) ...)` -> name, sections
std::pair<std::string, std::vector<const SExpr*>> open_define(const SExpr& doc, const char* kind) {
  if (!doc.is_list || doc.items.size() < 2 || !is_keyword(doc.items[0], "define"))
    throw PddlSyntaxError(doc.offset, "expected (define ...)");
  const SExpr& header = doc.items[1];
  if (!header.is_list || header.items.size() != 2 || !is_keyword(header.items[0], kind))
    throw PddlSyntaxError(header.offset, std::string("expected (") + kind + " <name>)");
  std::vector<const SExpr*> sections;
  for (std::size_t i = 2; i < doc.items.size(); ++i) {
    const SExpr& s = doc.items[i];
    if (!s.is_list || s.items.empty() || !s.items[0].is_word())
      throw PddlSyntaxError(s.offset, "expected section");
    sections.push_back(&s);
  }
  return {expect_word(header.items[1], "name"), sections};
}

}  // namespace

Domain parse_domain(std::string_view text) {
  const SExpr doc = SExprReader(text).read_document();
  auto [name, sections] = open_define(doc, "domain");
  Domain d;
  d.name = name;

  // Requirements first: they decide what the rest may contain.
  for (const SExpr* s : sections) {
    if (lower(s->items[0].word) != ":requirements") continue;
    for (std::size_t i = 1; i < s->items.size(); ++i) {
      const std::string flag = lower(expect_word(s->items[i], "requirement flag"));
      if (!supported_requirements().count(flag)) throw UnsupportedRequirement(flag);
      d.requirements.push_back(flag);
    }
  }
  if (d.requirements.empty()) d.requirements.push_back(":strips");

  std::vector<const SExpr*> action_sections;
  for (const SExpr* s : sections) {
    const std::string kw = lower(s->items[0].word);
    if (kw == ":requirements") continue;
    if (kw == ":types") {
      for (auto& t : parse_typed_list(s->items, 1, "type name")) {
        if (t.name == "object") continue;
        d.types.emplace_back(t.name, t.type);
      }
    } else if (kw == ":constants") {
      d.constants = parse_typed_list(s->items, 1, "constant");
    } else if (kw == ":predicates") {
      for (std::size_t i = 1; i < s->items.size(); ++i) {
        const SExpr& p = s->items[i];
        if (!p.is_list || p.items.empty()) throw PddlSyntaxError(p.offset, "expected predicate declaration");
        check_name(p.items[0], "predicate name");
        d.predicates.push_back({p.items[0].word, parse_typed_list(p.items, 1, "parameter")});
      }
    } else if (kw == ":action") {
      action_sections.push_back(s);
    } else if (kw == ":functions") {
      throw UnsupportedRequirement(":numeric-fluents");
    } else if (kw == ":durative-action") {
      throw UnsupportedRequirement(":durative-actions");
    } else if (kw == ":derived") {
      throw UnsupportedRequirement(":derived-predicates");
    } else {
      throw PddlSyntaxError(s->offset, "unknown domain section " + s->items[0].word);
    }
  }

  // Types: unique, parents declared, no cycles.
  {
    std::vector<std::string> names;
    for (const auto& t : d.types) names.push_back(t.first);
    check_unique(names, "type");
    for (const auto& t : d.types) {
      check_type_declared(d, t.second);
      std::string cur = t.second;
      for (std::size_t steps = 0; cur != "object"; ++steps) {
        if (cur == t.first || steps > d.types.size()) throw PddlValidationError("cyclic type '" + t.first + "'");
        cur = std::find_if(d.types.begin(), d.types.end(), [&](const auto& x) { return x.first == cur; })->second;
      }
    }
  }
  {
    std::vector<std::string> names;
    for (const auto& c : d.constants) {
      check_type_declared(d, c.type);
      names.push_back(c.name);
    }
    check_unique(names, "constant");
  }
  {
    std::vector<std::string> names;
    for (const auto& p : d.predicates) {
      names.push_back(p.name);
      std::vector<std::string> params;
      for (const auto& v : p.params) {
        if (!is_variable(v.name)) throw PddlValidationError("predicate parameter '" + v.name + "' must start with '?'");
        check_type_declared(d, v.type);
        params.push_back(v.name);
      }
      check_unique(params, "parameter");
    }
    check_unique(names, "predicate");
  }

  const Allowed allowed(d);
  std::vector<std::string> action_names;
  for (const SExpr* s : action_sections) {
    if (s->items.size() < 2) throw PddlSyntaxError(s->offset, "action without a name");
    check_name(s->items[1], "action name");
    ActionSchema a;
    a.name = s->items[1].word;
    Scope scope{d, {}};
    add_terms(scope, d.constants);
    for (std::size_t i = 2; i < s->items.size(); i += 2) {
      const std::string key = lower(expect_word(s->items[i], "action keyword"));
      if (i + 1 >= s->items.size()) throw PddlSyntaxError(s->items[i].offset, "missing value for " + key);
      const SExpr& value = s->items[i + 1];
      if (key == ":parameters") {
        if (!value.is_list) throw PddlSyntaxError(value.offset, "expected parameter list");
        a.params = parse_typed_list(value.items, 0, "parameter");
        std::vector<std::string> names;
        for (const auto& p : a.params) {
          if (!is_variable(p.name)) throw PddlValidationError("parameter '" + p.name + "' must start with '?'");
          check_type_declared(d, p.type);
          names.push_back(p.name);
        }
        check_unique(names, "parameter");
        add_terms(scope, a.params);
      } else if (key == ":precondition") {
        a.precondition = parse_condition(value, scope, allowed);
      } else if (key == ":effect") {
        a.effects = parse_effects(value, scope, allowed, a.name);
      } else {
        throw PddlSyntaxError(s->items[i].offset, "unknown action keyword " + key);
      }
    }
    action_names.push_back(a.name);
    d.actions.push_back(std::move(a));
  }
  check_unique(action_names, "action");
  return d;
}

namespace {

void validate_objects(const Domain& d, const std::vector<TypedName>& objects) {
  std::vector<std::string> names;
  for (const auto& c : d.constants) names.push_back(c.name);
  for (const auto& o : objects) {
    if (!is_identifier(o.name)) throw PddlValidationError("invalid object name '" + o.name + "'");
    check_type_declared(d, o.type);
    names.push_back(o.name);
  }
  check_unique(names, "object");
}

Scope object_scope(const Domain& d, const std::vector<TypedName>& objects) {
  Scope scope{d, {}};
  add_terms(scope, d.constants);
  add_terms(scope, objects);
  return scope;
}

void validate_ground_atom(const Atom& a, const Scope& scope) {
  const PredicateDecl* decl = scope.domain.find_predicate(a.predicate());
  if (!decl) throw PddlValidationError("undeclared predicate '" + a.predicate() + "'");
  if (decl->params.size() != a.arity())
    throw PddlValidationError("predicate '" + a.predicate() + "' expects " + std::to_string(decl->params.size()) +
                              " arguments, got " + std::to_string(a.arity()));
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto it = scope.terms.find(a.args()[i]);
    if (it == scope.terms.end() || is_variable(a.args()[i]))
      throw PddlValidationError("undeclared object '" + a.args()[i] + "' in " + a.to_string());
    if (!scope.domain.is_subtype(it->second, decl->params[i].type))
      throw PddlValidationError("type mismatch: '" + a.args()[i] + "' of type " + it->second + " used as " +
                                decl->params[i].type + " in " + a.to_string());
  }
}

void validate_ground_condition(const Condition& c, const Scope& scope) {
  if (c.kind == Condition::Kind::Literal) validate_ground_atom(c.atom, scope);
  if (c.kind == Condition::Kind::Equals) {
    for (const auto* t : {&c.lhs, &c.rhs}) {
      if (!scope.terms.count(*t) || is_variable(*t)) throw PddlValidationError("undeclared object '" + *t + "'");
    }
  }
  for (const auto& k : c.children) validate_ground_condition(k, scope);
}

}  // namespace

Problem parse_problem(std::string_view text, const Domain& domain) {
  const SExpr doc = SExprReader(text).read_document();
  auto [name, sections] = open_define(doc, "problem");
  Problem p;
  p.name = name;
  const SExpr* init_section = nullptr;
  const SExpr* goal_section = nullptr;
  for (const SExpr* s : sections) {
    const std::string kw = lower(s->items[0].word);
    if (kw == ":domain") {
      if (s->items.size() != 2) throw PddlSyntaxError(s->offset, "expected (:domain <name>)");
      p.domain_name = expect_word(s->items[1], "domain name");
    } else if (kw == ":objects") {
      p.objects = parse_typed_list(s->items, 1, "object");
    } else if (kw == ":init") {
      init_section = s;
    } else if (kw == ":goal") {
      if (s->items.size() != 2) throw PddlSyntaxError(s->offset, "expected (:goal <condition>)");
      goal_section = s;
    } else if (kw == ":metric") {
      throw UnsupportedRequirement(":numeric-fluents");
    } else if (kw == ":requirements") {
      continue;
    } else {
      throw PddlSyntaxError(s->offset, "unknown problem section " + s->items[0].word);
    }
  }
  if (!p.domain_name.empty() && p.domain_name != domain.name)
    throw PddlValidationError("problem is for domain '" + p.domain_name + "', not '" + domain.name + "'");
  if (!goal_section) throw PddlSyntaxError(doc.offset, "problem has no :goal");
  validate_objects(domain, p.objects);
  const Scope scope = object_scope(domain, p.objects);
  if (init_section) {
    for (std::size_t i = 1; i < init_section->items.size(); ++i) {
      const SExpr& e = init_section->items[i];
      if (e.is_list && !e.items.empty() && is_keyword(e.items[0], "="))
        throw UnsupportedRequirement(":numeric-fluents");
      if (e.is_list && !e.items.empty() && is_keyword(e.items[0], "not"))
        throw PddlSyntaxError(e.offset, "negative literals are not allowed in :init");
      p.init.insert(parse_literal_atom(e, scope));
    }
  }
  p.goal = parse_condition(goal_section->items[1], scope, Allowed(domain));
  return p;
}

Condition parse_goal(std::string_view text, const Domain& domain, const std::vector<TypedName>& objects) {
  const SExpr e = SExprReader(text).read_document();
  return parse_condition(e, object_scope(domain, objects), Allowed(domain));
}

Problem make_problem(const Domain& domain, std::string name, std::vector<TypedName> objects, AtomSet init,
                     Condition goal) {
  validate_objects(domain, objects);
  const Scope scope = object_scope(domain, objects);
  for (const auto& a : init) validate_ground_atom(a, scope);
  validate_ground_condition(goal, scope);
  Problem p;
  p.name = std::move(name);
  p.domain_name = domain.name;
  p.objects = std::move(objects);
  p.init = std::move(init);
  p.goal = std::move(goal);
  return p;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += " ";
    out += names[i].name;
    const bool last_of_run = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_run) out += " - " + names[i].type;
  }
  return out;
}

std::string effects_pddl(const std::vector<Effect>& effects) {
  std::vector<std::string> parts;
  for (const auto& g : effects) {
    std::vector<std::string> lits;
    for (const auto& a : g.add) lits.push_back(atom_pddl(a));
    for (const auto& a : g.del) lits.push_back("(not " + atom_pddl(a) + ")");
    if (g.guard.is_true()) {
      parts.insert(parts.end(), lits.begin(), lits.end());
    } else {
      std::string body = "(and";
      for (const auto& l : lits) body += " " + l;
      body += ")";
      parts.push_back("(when " + g.guard.to_pddl() + " " + body + ")");
    }
  }
  std::string out = "(and";
  for (const auto& p : parts) out += "\n      " + p;
  return out + ")";
}

}  // namespace

std::string print_domain(const Domain& d) {
  std::string out = "(define (domain " + d.name + ")\n";
  out += "  (:requirements";
  for (const auto& r : d.requirements) out += " " + r;
  out += ")\n";
  if (!d.types.empty()) {
    std::vector<TypedName> t;
    for (const auto& [name, parent] : d.types) t.push_back({name, parent});
    out += "  (:types " + typed_list(t) + ")\n";
  }
  if (!d.constants.empty()) out += "  (:constants " + typed_list(d.constants) + ")\n";
  out += "  (:predicates";
  for (const auto& p : d.predicates) {
    out += "\n    (" + p.name;
    if (!p.params.empty()) out += " " + typed_list(p.params);
    out += ")";
  }
  out += ")\n";
  for (const auto& a : d.actions) {
    out += "  (:action " + a.name + "\n";
    out += "    :parameters (" + typed_list(a.params) + ")\n";
    if (!a.precondition.is_true()) out += "    :precondition " + a.precondition.to_pddl() + "\n";
    out += "    :effect " + effects_pddl(a.effects) + ")\n";
  }
  return out + ")\n";
}

std::string print_problem(const Problem& p) {
  std::string out = "(define (problem " + p.name + ")\n";
  out += "  (:domain " + p.domain_name + ")\n";
  out += "  (:objects " + typed_list(p.objects) + ")\n";
  out += "  (:init";
  for (const auto& a : p.init.sorted()) out += "\n    " + atom_pddl(a);
  out += ")\n";
  out += "  (:goal " + p.goal.to_pddl() + "))\n";
  return out;
}

// ---------------------------------------------------------------------------
// Grounding and semantics

namespace {

Atom substitute(const Atom& a, const Binding& b) {
  std::vector<std::string> args;
  args.reserve(a.arity());
  for (const auto& x : a.args()) {
    auto it = b.find(x);
    args.push_back(it == b.end() ? x : it->second);
  }
  return Atom(a.predicate(), std::move(args));
}

const std::string& resolve(const std::string& term, const Binding& b) {
  auto it = b.find(term);
  return it == b.end() ? term : it->second;
}

}  // namespace

Condition ground_condition(const Condition& c, const Binding& b) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::True:
    case K::False:
      return c;
    case K::Literal:
      return Condition::literal(substitute(c.atom, b), c.positive);
    case K::Equals: {
      const auto& l = resolve(c.lhs, b);
      const auto& r = resolve(c.rhs, b);
      if (!is_variable(l) && !is_variable(r)) return Condition::constant(l == r);
      return Condition::equals(l, r);
    }
    case K::Not: {
      Condition inner = ground_condition(c.children[0], b);
      if (inner.is_true() || inner.is_false()) return Condition::constant(inner.is_false());
      if (inner.kind == K::Literal) return Condition::literal(inner.atom, !inner.positive);
      return Condition::negate(std::move(inner));
    }
    case K::And:
    case K::Or: {
      const bool is_and = c.kind == K::And;
      std::vector<Condition> kids;
      for (const auto& k : c.children) {
        Condition g = ground_condition(k, b);
        if (g.is_true() || g.is_false()) {
          if (g.is_false() == is_and) return g;
          continue;
        }
        kids.push_back(std::move(g));
      }
      if (kids.empty()) return Condition::constant(is_and);
      if (kids.size() == 1) return std::move(kids.front());
      return is_and ? Condition::conj(std::move(kids)) : Condition::disj(std::move(kids));
    }
    case K::Imply: {
      Condition a = ground_condition(c.children[0], b);
      Condition q = ground_condition(c.children[1], b);
      if (a.is_false() || q.is_true()) return Condition::constant(true);
      if (a.is_true()) return q;
      if (q.is_false()) return ground_condition(Condition::negate(std::move(a)), {});
      return Condition::imply(std::move(a), std::move(q));
    }
  }
  return c;
}

bool eval_condition(const AtomSet& s, const Condition& c) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Literal: return s.contains(c.atom) == c.positive;
    case K::Equals: return c.lhs == c.rhs;
    case K::Not: return !eval_condition(s, c.children[0]);
    case K::And:
      return std::all_of(c.children.begin(), c.children.end(), [&](const Condition& k) { return eval_condition(s, k); });
    case K::Or:
      return std::any_of(c.children.begin(), c.children.end(), [&](const Condition& k) { return eval_condition(s, k); });
    case K::Imply: return !eval_condition(s, c.children[0]) || eval_condition(s, c.children[1]);
  }
  return false;
}

bool eval_condition(const AtomSet& s, const Condition& c, const Binding& b) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::Literal: return s.contains(substitute(c.atom, b)) == c.positive;
    case K::Equals: return resolve(c.lhs, b) == resolve(c.rhs, b);
    case K::Not: return !eval_condition(s, c.children[0], b);
    case K::And:
      return std::all_of(c.children.begin(), c.children.end(),
                         [&](const Condition& k) { return eval_condition(s, k, b); });
    case K::Or:
      return std::any_of(c.children.begin(), c.children.end(),
                         [&](const Condition& k) { return eval_condition(s, k, b); });
    case K::Imply: return !eval_condition(s, c.children[0], b) || eval_condition(s, c.children[1], b);
    default: return eval_condition(s, c);
  }
}

bool applicable(const AtomSet& s, const GroundAction& a) { return eval_condition(s, a.pre); }

AtomSet apply(const AtomSet& s, const GroundAction& a) {
  if (!applicable(s, a)) throw NotApplicable("precondition of " + a.name() + " does not hold");
  std::vector<const Effect*> fired;
  for (const auto& e : a.effects) {
    if (eval_condition(s, e.guard)) fired.push_back(&e);
  }
  AtomSet next = s;
  for (const Effect* e : fired) {
    for (const auto& d : e->del) next.erase(d);
  }
  for (const Effect* e : fired) {
    for (const auto& x : e->add) next.insert(x);
  }
  return next;
}

std::string GroundAction::name() const { return Atom(schema, args).to_string(); }

void PlanningTask::reindex() {
  by_name_.clear();
  for (std::size_t i = 0; i < actions.size(); ++i) by_name_.emplace(actions[i].name(), i);
}

std::optional<std::size_t> PlanningTask::find_action(std::string_view display) const {
  std::string key;
  try {
    key = parse_atom(display).to_string();
  } catch (const Error&) {
    // `name()` with an empty argument list
    std::string_view d = display;
    while (!d.empty() && std::isspace(static_cast<unsigned char>(d.back()))) d.remove_suffix(1);
    if (!d.ends_with("()")) return std::nullopt;
    d.remove_suffix(2);
    key = std::string(d);
  }
  auto it = by_name_.find(key);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

PlanningTask ground(const Domain& d, const Problem& p) {
  PlanningTask task;
  task.predicates = d.predicates;
  task.objects = d.constants;
  task.objects.insert(task.objects.end(), p.objects.begin(), p.objects.end());
  task.init = p.init;
  task.goal = ground_condition(p.goal, {});

  std::vector<const ActionSchema*> schemas;
  for (const auto& a : d.actions) schemas.push_back(&a);
  std::sort(schemas.begin(), schemas.end(), [](auto* x, auto* y) { return x->name < y->name; });

  for (const ActionSchema* schema : schemas) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& param : schema->params) {
      std::vector<std::string> candidates;
      for (const auto& o : task.objects) {
        if (d.is_subtype(o.type, param.type)) candidates.push_back(o.name);
      }
      std::sort(candidates.begin(), candidates.end());
      domains.push_back(std::move(candidates));
    }
    if (std::any_of(domains.begin(), domains.end(), [](const auto& v) { return v.empty(); })) continue;

    std::vector<std::size_t> idx(domains.size(), 0);
    for (;;) {
      Binding b;
      std::vector<std::string> args;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        b[schema->params[i].name] = domains[i][idx[i]];
        args.push_back(domains[i][idx[i]]);
      }
      Condition pre = ground_condition(schema->precondition, b);
      if (!pre.is_false()) {
        GroundAction ga{schema->name, std::move(args), std::move(pre), {}};
        for (const auto& e : schema->effects) {
          Condition guard = ground_condition(e.guard, b);
          if (guard.is_false()) continue;
          Effect g{std::move(guard), {}, {}};
          for (const auto& a : e.add) g.add.push_back(substitute(a, b));
          for (const auto& a : e.del) g.del.push_back(substitute(a, b));
          ga.effects.push_back(std::move(g));
        }
        task.actions.push_back(std::move(ga));
      }
      // odometer increment, last position fastest
      std::size_t k = idx.size();
      while (k > 0) {
        --k;
        if (++idx[k] < domains[k].size()) break;
        idx[k] = 0;
        if (k == 0) {
          k = idx.size() + 1;
          break;
        }
      }
      if (idx.empty() || k == idx.size() + 1) break;
    }
  }
  task.reindex();
  return task;
}

}  // namespace safeplan
