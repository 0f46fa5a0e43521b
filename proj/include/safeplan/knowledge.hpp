#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safeplan/ltl.hpp"

namespace safeplan {

/// True when some infinite trace satisfies `f`. Exact (tableau), no atom cap.
bool satisfiable(const Formula& f);

/// True when no infinite trace satisfies the conjunction of `fs`.
/// Throws AlphabetTooLarge when the formulas mention more than
/// kMaxAlphabetAtoms atoms.
bool is_conflicting(std::span<const Formula> fs);

enum class AddOutcome { AddedNew, MergedDuplicate, Conflict };

std::string_view to_string(AddOutcome o);

struct StoreEntry {
  enum class Status { Representative, Duplicate, Quarantined };

  Formula formula;
  std::string source;
  std::size_t added_at = 0;
  Status status = Status::Representative;
  /// Added without the duplicate and conflict checks.
  bool forced = false;
};

/// Append-only log of constraints. Each formula is either a new equivalence
/// class representative, a duplicate of an existing one, or quarantined
/// because it contradicts the representatives.
class ConstraintStore {
 public:
  /// Throws AlphabetTooLarge when the checks cannot run; use force() then.
  AddOutcome add(const Formula& f, std::string source = {});
  /// Appends `f` as a representative without any checks. The entry is
  /// flagged so later readers can tell.
  void force(const Formula& f, std::string source = {});

  /// Canonical conjunction of the representatives (`true` when empty).
  Formula active() const;
  std::vector<Formula> representatives() const;
  const std::vector<StoreEntry>& entries() const { return entries_; }

  std::size_t total() const { return entries_.size(); }
  std::size_t unique() const { return unique_; }
  std::size_t conflicts_detected() const { return conflicts_; }
  /// Every detected conflict is resolved by quarantining the newer formula.
  std::size_t conflicts_resolved() const { return conflicts_; }

  /// Text form: one representative formula per line, metadata in `#`
  /// comments, duplicates and quarantined formulas commented out.
  std::string serialize() const;
  /// Inverse of serialize(); statuses are restored as recorded.
  static ConstraintStore deserialize(std::string_view text);

 private:
  void append(StoreEntry e);

  std::vector<StoreEntry> entries_;
  std::size_t unique_ = 0;
  std::size_t conflicts_ = 0;
};

/// Non-blank, non-`#` lines of a constraint file, trimmed.
std::vector<std::string> formula_lines(std::string_view text);

}  // namespace safeplan
