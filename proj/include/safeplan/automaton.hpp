#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "safeplan/ltl.hpp"

namespace safeplan {

/// Upper bound on the atoms an automaton alphabet may range over; letters
/// are all 2^n subsets.
inline constexpr std::size_t kMaxAlphabetAtoms = 12;

/// Default trace depth for semantic_similarity().
inline constexpr int kDefaultSimilarityDepth = 5;

/// Deterministic automaton whose states are the residuals reachable from a
/// formula by progression. A letter is a bitmask over `alphabet`: bit i set
/// means alphabet[i] holds.
struct ResidualAutomaton {
  std::vector<Atom> alphabet;
  /// states[0] is the initial formula.
  std::vector<Formula> states;
  /// transitions[state][letter] -> state index
  std::vector<std::vector<std::uint32_t>> transitions;

  std::size_t size() const { return states.size(); }
  std::size_t letter_count() const { return std::size_t{1} << alphabet.size(); }
  std::optional<std::size_t> find(const Formula& f) const;
  AtomSet letter(std::uint32_t mask) const;
};

/// Closure of `f` under progress() over every letter of the alphabet.
/// Throws AlphabetTooLarge past kMaxAlphabetAtoms.
ResidualAutomaton residual_automaton(const Formula& f, std::span<const Atom> alphabet);

/// Progression-behavior equivalence: no finite trace over the joint alphabet
/// drives exactly one side to ⊥, or exactly one side to ⊤.
bool prefix_equivalent(const Formula& a, const Formula& b);

/// Jaccard index of the bad-prefix sets (traces of length 1..depth whose
/// progression reaches ⊥). Two empty sets give 1.0.
double semantic_similarity(const Formula& a, const Formula& b, int depth = kDefaultSimilarityDepth);

}  // namespace safeplan
