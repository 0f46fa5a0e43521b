#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safeplan/atom.hpp"

namespace safeplan {

/// Variant tag. The declaration order is the first key of the canonical
/// structural order.
enum class LtlOp : unsigned char { False, True, Atom, Not, And, Or, Next, Globally, Finally, Until };

/// Immutable LTL formula over ground atoms. Copies share structure, so
/// passing formulas by value is cheap.
///
/// The static builders (`make_*`) construct nodes verbatim. Use simplify()
/// to obtain the canonical form; everything returned by parse_ltl() and
/// progress() is already canonical.
class Formula {
 public:
  /// Default-constructed formula is `true`.
  Formula();

  static Formula truth();
  static Formula falsity();
  static Formula constant(bool value) { return value ? truth() : falsity(); }
  static Formula make_atom(Atom atom);
  static Formula make_not(Formula f);
  static Formula make_and(std::vector<Formula> children);
  static Formula make_or(std::vector<Formula> children);
  static Formula make_next(Formula f);
  static Formula make_globally(Formula f);
  static Formula make_finally(Formula f);
  static Formula make_until(Formula lhs, Formula rhs);

  LtlOp op() const { return node_->op; }
  bool is_true() const { return node_->op == LtlOp::True; }
  bool is_false() const { return node_->op == LtlOp::False; }
  bool is_constant() const { return is_true() || is_false(); }

  /// Only meaningful when op() == LtlOp::Atom.
  const Atom& atom() const { return node_->atom; }
  std::span<const Formula> children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }

  std::size_t hash() const { return node_->hash; }
  /// Number of AST nodes.
  std::size_t size() const { return node_->size; }
  /// Pointer identity; structurally equal formulas may still differ here.
  bool same_node(const Formula& other) const { return node_ == other.node_; }

  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    LtlOp op;
    Atom atom;
    std::vector<Formula> children;
    std::size_t hash;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula build(LtlOp op, Atom atom, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Parses the ASCII grammar (with the Unicode aliases ¬ ∧ ∨ → ⊤ ⊥) and
/// returns the canonical AST. Throws LtlSyntaxError.
Formula parse_ltl(std::string_view text);

/// Canonical form: flattened And/Or, constants propagated, duplicate siblings
/// removed, siblings sorted, no double negation, temporal operators over
/// constants folded.
Formula simplify(const Formula& f);

/// Progression through one observed state. Requires a canonical input and
/// returns a canonical residual. When `visits` is given, it is incremented
/// once per AST node the recursion touches.
Formula progress(const Formula& f, const AtomSet& state, std::size_t* visits = nullptr);

/// Canonical conjunction of the given formulas (`true` when empty).
Formula conjoin(std::span<const Formula> fs);

/// Distinct atoms occurring in `f`, sorted.
std::vector<Atom> atoms_of(const Formula& f);
std::vector<Atom> atoms_of(std::span<const Formula> fs);

/// Satisfaction on the ultimately periodic trace `prefix · loop^ω`.
/// `loop` must be nonempty.
bool evaluate_lasso(const Formula& f, std::span<const AtomSet> prefix, std::span<const AtomSet> loop);

}  // namespace safeplan
