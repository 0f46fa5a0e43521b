#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safeplan/ltl.hpp"

namespace safeplan {

struct CandidateGroup {
  std::string id;
  /// Raw formula strings; unparseable ones are recorded, not rejected.
  std::vector<std::string> candidates;
};

struct Discarded {
  enum class Reason { SyntaxError, MinorityClass, AlphabetCap };

  std::string group;
  std::string text;
  Reason reason;
  /// Parser message for syntax errors, empty otherwise.
  std::string detail;
};

std::string_view to_string(Discarded::Reason r);

struct EquivalenceClass {
  /// Smallest member: fewest AST nodes, then the canonical structural order.
  Formula representative;
  std::vector<Formula> members;

  std::size_t size() const { return members.size(); }
};

/// Partitions formulas into prefix-equivalence classes, ordered winner
/// first: larger classes first, then by representative. Pairs whose joint
/// alphabet exceeds kMaxAlphabetAtoms are compared structurally.
std::vector<EquivalenceClass> equivalence_classes(std::span<const Formula> formulas);

struct GroupVote {
  std::string group;
  Formula representative;
  /// Winner first.
  std::vector<EquivalenceClass> classes;
  std::vector<Discarded> discarded;
};

/// Throws AllCandidatesInvalid when no candidate parses.
GroupVote intra_group_vote(const CandidateGroup& group);

/// Representative of the largest class among the group winners.
Formula inter_group_vote(std::span<const Formula> representatives);

struct VoteResult {
  Formula winner;
  std::vector<GroupVote> groups;
  /// Inter-group classes, winner first; sizes sum to the group count.
  std::vector<EquivalenceClass> tally;
  std::vector<Discarded> discarded;
};

/// Intra-group vote in each group, then an inter-group vote over the group
/// representatives. Groups with no parseable candidate are skipped; throws
/// AllCandidatesInvalid when that leaves none.
VoteResult dual_layer_vote(const std::vector<CandidateGroup>& groups);

}  // namespace safeplan
