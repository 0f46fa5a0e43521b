#include "safeplan/voting.hpp"

#include <algorithm>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"

namespace safeplan {

std::string_view to_string(Discarded::Reason r) {
  switch (r) {
    case Discarded::Reason::SyntaxError: return "syntax_error";
    case Discarded::Reason::MinorityClass: return "minority_class";
    case Discarded::Reason::AlphabetCap: return "alphabet_cap";
  }
  return "";
}

namespace {

// Fewer nodes first, then the structural order.
bool smaller(const Formula& a, const Formula& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool same_class(const Formula& a, const Formula& b) {
  const Formula both[] = {a, b};
  if (atoms_of(both).size() > kMaxAlphabetAtoms) return a == b;
  return prefix_equivalent(a, b);
}

}  // namespace

std::vector<EquivalenceClass> equivalence_classes(std::span<const Formula> formulas) {
  std::vector<EquivalenceClass> classes;
  for (const auto& f : formulas) {
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const EquivalenceClass& c) { return same_class(c.members.front(), f); });
    if (it == classes.end()) {
      classes.push_back({f, {f}});
    } else {
      it->members.push_back(f);
      if (smaller(f, it->representative)) it->representative = f;
    }
  }
  std::stable_sort(classes.begin(), classes.end(), [](const EquivalenceClass& a, const EquivalenceClass& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return smaller(a.representative, b.representative);
  });
  return classes;
}

GroupVote intra_group_vote(const CandidateGroup& group) {
  GroupVote vote;
  vote.group = group.id;
  std::vector<Formula> parsed;
  std::vector<std::string> texts;
  for (const auto& text : group.candidates) {
    try {
      Formula f = parse_ltl(text);
      if (atoms_of(f).size() > kMaxAlphabetAtoms) {
        vote.discarded.push_back({group.id, text, Discarded::Reason::AlphabetCap, {}});
        continue;
      }
      parsed.push_back(std::move(f));
      texts.push_back(text);
    } catch (const LtlSyntaxError& e) {
      vote.discarded.push_back({group.id, text, Discarded::Reason::SyntaxError, e.what()});
    }
  }
  if (parsed.empty()) throw AllCandidatesInvalid("group '" + group.id + "': no candidate parses");
  vote.classes = equivalence_classes(parsed);
  vote.representative = vote.classes.front().representative;
  const auto& winners = vote.classes.front().members;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (std::find(winners.begin(), winners.end(), parsed[i]) == winners.end())
      vote.discarded.push_back({group.id, texts[i], Discarded::Reason::MinorityClass, {}});
  }
  return vote;
}

Formula inter_group_vote(std::span<const Formula> representatives) {
  if (representatives.empty()) throw AllCandidatesInvalid("inter-group vote over no representatives");
  return equivalence_classes(representatives).front().representative;
}

VoteResult dual_layer_vote(const std::vector<CandidateGroup>& groups) {
  VoteResult result;
  std::vector<Formula> reps;
  for (const auto& g : groups) {
    try {
      GroupVote v = intra_group_vote(g);
      reps.push_back(v.representative);
      result.discarded.insert(result.discarded.end(), v.discarded.begin(), v.discarded.end());
      result.groups.push_back(std::move(v));
    } catch (const AllCandidatesInvalid&) {
      for (const auto& text : g.candidates) {
        std::string detail;
        auto reason = Discarded::Reason::SyntaxError;
        try {
          parse_ltl(text);
          reason = Discarded::Reason::AlphabetCap;
        } catch (const LtlSyntaxError& e) {
          detail = e.what();
        }
        result.discarded.push_back({g.id, text, reason, detail});
      }
    }
  }
  if (reps.empty()) throw AllCandidatesInvalid("no group has a parseable candidate");
  result.tally = equivalence_classes(reps);
  result.winner = result.tally.front().representative;
  return result;
}

}  // namespace safeplan
