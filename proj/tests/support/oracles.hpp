// Reference implementations used only by the tests. They share no code with
// the library beyond the Formula/Atom data types.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "safeplan/ltl.hpp"

namespace oracle {

using safeplan::Atom;
using safeplan::AtomSet;
using safeplan::Formula;
using safeplan::LtlOp;

// ---------------------------------------------------------------------------
// Trace semantics by forward scanning on the lasso prefix · loop^ω.

class Lasso {
 public:
  Lasso(std::vector<AtomSet> prefix, std::vector<AtomSet> loop) : prefix_len_(prefix.size()) {
    states_ = std::move(prefix);
    states_.insert(states_.end(), loop.begin(), loop.end());
  }

  bool holds(const Formula& f, std::size_t i = 0) const {
    switch (f.op()) {
      case LtlOp::True: return true;
      case LtlOp::False: return false;
      case LtlOp::Atom: return states_[i].contains(f.atom());
      case LtlOp::Not: return !holds(f.child(), i);
      case LtlOp::And:
        for (const auto& c : f.children())
          if (!holds(c, i)) return false;
        return true;
      case LtlOp::Or:
        for (const auto& c : f.children())
          if (holds(c, i)) return true;
        return false;
      case LtlOp::Next: return holds(f.child(), next(i));
      case LtlOp::Globally: {
        std::size_t j = i;
        for (std::size_t step = 0; step <= states_.size(); ++step, j = next(j))
          if (!holds(f.child(), j)) return false;
        return true;
      }
      case LtlOp::Finally: {
        std::size_t j = i;
        for (std::size_t step = 0; step <= states_.size(); ++step, j = next(j))
          if (holds(f.child(), j)) return true;
        return false;
      }
      case LtlOp::Until: {
        // Every position reachable from i is seen within |states| steps.
        std::size_t j = i;
        for (std::size_t step = 0; step <= states_.size(); ++step, j = next(j)) {
          if (holds(f.child(1), j)) return true;
          if (!holds(f.child(0), j)) return false;
        }
        return false;
      }
    }
    return false;
  }

 private:
  std::size_t next(std::size_t i) const { return i + 1 < states_.size() ? i + 1 : prefix_len_; }

  std::size_t prefix_len_;
  std::vector<AtomSet> states_;
};

inline bool holds(const Formula& f, const std::vector<AtomSet>& prefix, const std::vector<AtomSet>& loop) {
  return Lasso(prefix, loop).holds(f);
}

inline std::vector<Atom> atoms(std::initializer_list<const char*> names) {
  std::vector<Atom> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

/// Subset of `alphabet` selected by the bits of `mask`.
inline AtomSet letter(const std::vector<Atom>& alphabet, std::uint32_t mask) {
  AtomSet s;
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (mask & (1u << i)) s.insert(alphabet[i]);
  return s;
}

/// Calls fn(trace) for every trace over `alphabet` of length 1..max_len.
template <typename Fn>
void for_each_trace(const std::vector<Atom>& alphabet, std::size_t max_len, Fn fn) {
  const std::uint32_t letters = 1u << alphabet.size();
  std::vector<AtomSet> trace;
  std::vector<std::uint32_t> masks;
  auto rec = [&](auto& self) -> void {
    if (!trace.empty()) fn(trace);
    if (trace.size() == max_len) return;
    for (std::uint32_t m = 0; m < letters; ++m) {
      trace.push_back(letter(alphabet, m));
      self(self);
      trace.pop_back();
    }
  };
  rec(rec);
}

/// A finite trace is a bad prefix when no infinite extension satisfies the
/// formula. Decided by trying every lasso extension with short stems and
/// loops, which is exhaustive for the formula sizes the tests use.
inline bool is_bad_prefix(const Formula& f, const std::vector<AtomSet>& trace, const std::vector<Atom>& alphabet,
                          std::size_t extension = 2) {
  bool bad = true;
  std::vector<AtomSet> stem = trace;
  auto try_loops = [&](auto& self, std::vector<AtomSet>& loop) -> void {
    if (!bad) return;
    if (!loop.empty() && holds(f, stem, loop)) {
      bad = false;
      return;
    }
    if (loop.size() == extension) return;
    for (std::uint32_t m = 0; m < (1u << alphabet.size()); ++m) {
      loop.push_back(letter(alphabet, m));
      self(self, loop);
      loop.pop_back();
    }
  };
  std::vector<AtomSet> loop;
  try_loops(try_loops, loop);
  return bad;
}

// ---------------------------------------------------------------------------
// Random formulas.

class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, std::vector<Atom> alphabet) : rng_(seed), alphabet_(std::move(alphabet)) {}

  /// Raw (not canonicalized) formula with exactly `size` nodes where possible.
  Formula raw(int size) {
    if (size <= 1) return leaf();
    std::uniform_int_distribution<int> pick(0, 6);
    switch (pick(rng_)) {
      case 0: return Formula::make_not(raw(size - 1));
      case 1: return Formula::make_next(raw(size - 1));
      case 2: return Formula::make_globally(raw(size - 1));
      case 3: return Formula::make_finally(raw(size - 1));
      default: {
        if (size < 3) return Formula::make_not(raw(size - 1));
        std::uniform_int_distribution<int> split(1, size - 2);
        const int left = split(rng_);
        Formula a = raw(left);
        Formula b = raw(size - 1 - left);
        std::uniform_int_distribution<int> bin(0, 2);
        switch (bin(rng_)) {
          case 0: return Formula::make_and({a, b});
          case 1: return Formula::make_or({a, b});
          default: return Formula::make_until(a, b);
        }
      }
    }
  }

  Formula canonical(int size) { return safeplan::simplify(raw(size)); }

  std::mt19937_64& rng() { return rng_; }

 private:
  Formula leaf() {
    std::uniform_int_distribution<std::size_t> pick(0, alphabet_.size() + 1);
    const std::size_t k = pick(rng_);
    if (k == alphabet_.size()) return Formula::truth();
    if (k == alphabet_.size() + 1) return Formula::falsity();
    return Formula::make_atom(alphabet_[k]);
  }

  std::mt19937_64 rng_;
  std::vector<Atom> alphabet_;
};

// ---------------------------------------------------------------------------
// Random ground planning tasks with their own bitmask semantics.

struct Literal {
  int atom;
  bool positive;
};

struct RandAction {
  std::string name;
  std::vector<Literal> pre;
  std::vector<int> add;
  std::vector<int> del;
};

/// One conjunct of the constraint family.
struct Conjunct {
  enum Kind { NeverP, EventuallyP, PUntilQ } kind;
  int p;
  int q = -1;
};

struct RandTask {
  std::vector<std::string> atom_names;  // index -> "pred_obj" style PDDL atom text
  std::vector<Atom> atoms;              // same atoms as library values
  std::vector<std::string> predicates;  // predicate declarations, PDDL text
  std::vector<std::string> objects;
  std::vector<RandAction> actions;
  std::uint32_t init = 0;
  std::vector<Literal> goal;
  std::vector<Conjunct> constraint;

  std::string domain_pddl() const;
  std::string problem_pddl() const;
  std::string constraint_text() const;
  /// Formula with one conjunct dropped; for monotonicity checks.
  std::string constraint_text(const std::vector<Conjunct>& cs) const;
};

inline std::string lit_pddl(const RandTask& t, const Literal& l) {
  return l.positive ? t.atom_names[l.atom] : "(not " + t.atom_names[l.atom] + ")";
}

inline std::string RandTask::domain_pddl() const {
  std::string out = "(define (domain rand)\n  (:requirements :strips :negative-preconditions)\n";
  out += "  (:constants";
  for (const auto& o : objects) out += " " + o;
  out += ")\n  (:predicates";
  for (const auto& p : predicates) out += " " + p;
  out += ")\n";
  for (const auto& a : actions) {
    out += "  (:action " + a.name + "\n    :parameters ()\n    :precondition (and";
    for (const auto& l : a.pre) out += " " + lit_pddl(*this, l);
    out += ")\n    :effect (and";
    for (int x : a.add) out += " " + atom_names[x];
    for (int x : a.del) out += " (not " + atom_names[x] + ")";
    out += "))\n";
  }
  return out + ")\n";
}

inline std::string RandTask::problem_pddl() const {
  std::string out = "(define (problem rand-p)\n  (:domain rand)\n  (:objects)\n  (:init";
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (init & (1u << i)) out += " " + atom_names[i];
  out += ")\n  (:goal (and";
  for (const auto& l : goal) out += " " + lit_pddl(*this, l);
  return out + ")))\n";
}

inline std::string RandTask::constraint_text(const std::vector<Conjunct>& cs) const {
  std::string out;
  for (const auto& c : cs) {
    if (!out.empty()) out += " & ";
    const std::string p = atoms[c.p].to_string();
    switch (c.kind) {
      case Conjunct::NeverP: out += "G !" + p; break;
      case Conjunct::EventuallyP: out += "F " + p; break;
      case Conjunct::PUntilQ: out += "(" + p + " U " + atoms[c.q].to_string() + ")"; break;
    }
  }
  return out.empty() ? "true" : out;
}

inline std::string RandTask::constraint_text() const { return constraint_text(constraint); }

/// ≤ 4 predicates, ≤ 3 objects, ≤ 6 ground actions, a conjunctive goal and
/// a constraint of one or two conjuncts from {G!p, F p, p U q}.
inline RandTask random_task(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandTask t;
  const int n_objects = uniform(1, 3);
  for (int i = 0; i < n_objects; ++i) t.objects.push_back("o" + std::to_string(i));
  const int n_preds = uniform(1, 4);
  for (int p = 0; p < n_preds; ++p) {
    const std::string name = "p" + std::to_string(p);
    const bool unary = uniform(0, 2) > 0;
    t.predicates.push_back(unary ? "(" + name + " ?x)" : "(" + name + ")");
    if (unary) {
      for (const auto& o : t.objects) {
        t.atom_names.push_back("(" + name + " " + o + ")");
        t.atoms.emplace_back(name, std::vector<std::string>{o});
      }
    } else {
      t.atom_names.push_back("(" + name + ")");
      t.atoms.emplace_back(name);
    }
  }
  const int n_atoms = static_cast<int>(t.atoms.size());
  const int n_actions = uniform(1, 6);
  for (int a = 0; a < n_actions; ++a) {
    RandAction act;
    act.name = "a" + std::to_string(a);
    std::set<int> used;
    for (int k = uniform(0, 2); k > 0; --k) {
      const int x = uniform(0, n_atoms - 1);
      if (used.insert(x).second) act.pre.push_back({x, uniform(0, 2) > 0});
    }
    std::set<int> touched;
    for (int k = uniform(1, 2); k > 0; --k) {
      const int x = uniform(0, n_atoms - 1);
      if (!touched.insert(x).second) continue;
      (uniform(0, 2) > 0 ? act.add : act.del).push_back(x);
    }
    t.actions.push_back(std::move(act));
  }
  for (int i = 0; i < n_atoms; ++i)
    if (uniform(0, 3) == 0) t.init |= 1u << i;
  std::set<int> goal_atoms;
  for (int k = uniform(1, 2); k > 0; --k) {
    const int x = uniform(0, n_atoms - 1);
    if (goal_atoms.insert(x).second) t.goal.push_back({x, uniform(0, 3) > 0});
  }
  for (int k = uniform(1, 2); k > 0; --k) {
    Conjunct c{static_cast<Conjunct::Kind>(uniform(0, 2)), uniform(0, n_atoms - 1)};
    if (c.kind == Conjunct::PUntilQ) c.q = uniform(0, n_atoms - 1);
    t.constraint.push_back(c);
  }
  return t;
}

inline bool lit_holds(std::uint32_t s, const Literal& l) { return static_cast<bool>(s & (1u << l.atom)) == l.positive; }

inline bool applicable(std::uint32_t s, const RandAction& a) {
  for (const auto& l : a.pre)
    if (!lit_holds(s, l)) return false;
  return true;
}

inline std::uint32_t successor(std::uint32_t s, const RandAction& a) {
  for (int x : a.del) s &= ~(1u << x);
  for (int x : a.add) s |= 1u << x;
  return s;
}

inline bool goal_holds(const RandTask& t, std::uint32_t s) {
  for (const auto& l : t.goal)
    if (!lit_holds(s, l)) return false;
  return true;
}

/// Per-conjunct monitor status: 0 pending, 1 discharged, 2 violated.
using Monitor = std::vector<std::uint8_t>;

inline Monitor observe(const std::vector<Conjunct>& cs, Monitor m, std::uint32_t s) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (m[i] != 0) continue;
    const bool p = s & (1u << cs[i].p);
    switch (cs[i].kind) {
      case Conjunct::NeverP:
        if (p) m[i] = 2;
        break;
      case Conjunct::EventuallyP:
        if (p) m[i] = 1;
        break;
      case Conjunct::PUntilQ:
        if (s & (1u << cs[i].q)) m[i] = 1;
        else if (!p) m[i] = 2;
        break;
    }
  }
  return m;
}

inline bool violated(const Monitor& m) {
  for (auto x : m)
    if (x == 2) return true;
  return false;
}

struct BfsAnswer {
  std::optional<std::size_t> shortest;  // plan length
  bool conclusive = true;                // false if the depth bound cut the search
  std::vector<int> plan;                 // a shortest plan, action indices
};

/// Breadth-first search over (state, monitor) to `max_depth`.
inline BfsAnswer bfs(const RandTask& t, const std::vector<Conjunct>& cs, std::size_t max_depth = 10) {
  BfsAnswer ans;
  Monitor m0 = observe(cs, Monitor(cs.size(), 0), t.init);
  if (violated(m0)) return ans;
  using Key = std::pair<std::uint32_t, Monitor>;
  std::map<Key, std::pair<Key, int>> parent;
  std::set<Key> seen{{t.init, m0}};
  std::vector<Key> frontier{{t.init, m0}};
  auto extract = [&](Key k) {
    std::vector<int> plan;
    while (parent.count(k)) {
      plan.push_back(parent[k].second);
      k = parent[k].first;
    }
    return std::vector<int>(plan.rbegin(), plan.rend());
  };
  for (std::size_t depth = 0;; ++depth) {
    for (const auto& k : frontier) {
      if (goal_holds(t, k.first)) {
        ans.shortest = depth;
        ans.plan = extract(k);
        return ans;
      }
    }
    if (frontier.empty()) return ans;
    if (depth == max_depth) {
      ans.conclusive = false;
      return ans;
    }
    std::vector<Key> next;
    for (const auto& k : frontier) {
      for (std::size_t a = 0; a < t.actions.size(); ++a) {
        if (!applicable(k.first, t.actions[a])) continue;
        const std::uint32_t s2 = successor(k.first, t.actions[a]);
        Monitor m2 = observe(cs, k.second, s2);
        if (violated(m2)) continue;
        Key k2{s2, m2};
        if (seen.insert(k2).second) {
          parent[k2] = {k, static_cast<int>(a)};
          next.push_back(k2);
        }
      }
    }
    frontier = std::move(next);
  }
}

/// Replays action indices; true iff every step applies, the monitor never
/// reports a violation and the goal holds at the end.
inline bool replay_ok(const RandTask& t, const std::vector<Conjunct>& cs, const std::vector<int>& plan) {
  std::uint32_t s = t.init;
  Monitor m = observe(cs, Monitor(cs.size(), 0), s);
  if (violated(m)) return false;
  for (int a : plan) {
    if (!applicable(s, t.actions[a])) return false;
    s = successor(s, t.actions[a]);
    m = observe(cs, m, s);
    if (violated(m)) return false;
  }
  return goal_holds(t, s);
}

}  // namespace oracle
