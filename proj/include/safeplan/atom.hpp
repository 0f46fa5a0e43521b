#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace safeplan {

/// A ground (or, inside PDDL schemas, lifted) atom `predicate(arg, ...)`.
/// Immutable; the hash is computed once at construction.
class Atom {
 public:
  Atom() = default;
  explicit Atom(std::string predicate, std::vector<std::string> args = {});

  const std::string& predicate() const { return predicate_; }
  const std::vector<std::string>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  std::size_t hash() const { return hash_; }

  /// `p` for nullary atoms, `p(a, b)` otherwise.
  std::string to_string() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.hash_ == b.hash_ && a.predicate_ == b.predicate_ && a.args_ == b.args_;
  }
  /// Orders by predicate name, then argument list.
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  std::string predicate_;
  std::vector<std::string> args_;
  std::size_t hash_ = 0;
};

/// True if `name` matches `[A-Za-z_][A-Za-z0-9_-]*`.
bool is_identifier(std::string_view name);

/// Parses `p`, `p(a, b)` or `(p a b)`.
Atom parse_atom(std::string_view text);

struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept { return a.hash(); }
};

/// A state: a set of ground atoms under the closed-world assumption.
/// Keeps an order-independent hash up to date so states can key hash maps.
class AtomSet {
 public:
  using container = std::unordered_set<Atom, AtomHash>;
  using const_iterator = container::const_iterator;

  AtomSet() = default;
  AtomSet(std::initializer_list<Atom> atoms);
  template <typename It>
  AtomSet(It first, It last) {
    for (; first != last; ++first) insert(*first);
  }

  bool contains(const Atom& a) const { return atoms_.find(a) != atoms_.end(); }
  bool insert(const Atom& a);
  bool erase(const Atom& a);
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  std::size_t hash() const { return hash_; }

  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }

  /// Atoms in canonical order, for printing and deterministic iteration.
  std::vector<Atom> sorted() const;
  std::string to_string() const;

  friend bool operator==(const AtomSet& a, const AtomSet& b) {
    return a.hash_ == b.hash_ && a.atoms_ == b.atoms_;
  }

 private:
  container atoms_;
  std::size_t hash_ = 0;
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const noexcept { return s.hash(); }
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace safeplan
