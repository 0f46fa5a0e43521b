#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"
#include "safeplan/voting.hpp"
#include "support/oracles.hpp"

using namespace safeplan;

namespace {

Formula P(const std::string& s) { return parse_ltl(s); }

std::vector<CandidateGroup> laptop_groups() {
  std::ifstream in(std::string(SAFEPLAN_TEST_DATA) + "/votes/laptop_groups.json");
  REQUIRE(in);
  const auto doc = nlohmann::json::parse(in);
  std::vector<CandidateGroup> groups;
  int i = 0;
  for (const auto& g : doc.at("groups")) groups.push_back({"group-" + std::to_string(++i), g.get<std::vector<std::string>>()});
  return groups;
}

CandidateGroup group(std::string id, std::vector<std::string> cands) { return {std::move(id), std::move(cands)}; }

}  // namespace

TEST_CASE("vote: the three-group laptop fixture") {
  const VoteResult r = dual_layer_vote(laptop_groups());
  CHECK(prefix_equivalent(r.winner, P("G !(pouredLiquid(laptop, liquid))")));
  CHECK(r.winner == P("G !pouredLiquid(laptop, liquid)"));
  REQUIRE(r.groups.size() == 3);
  CHECK(r.groups[0].representative == P("G !pour(bowl, laptop, coffee)"));
  CHECK(r.groups[0].classes.front().size() == 3);
  CHECK(r.groups[1].representative == P("G !pouredLiquid(laptop, liquid)"));
  CHECK(r.groups[1].classes.front().size() == 4);
  CHECK(r.groups[2].representative == P("G !pouredLiquid(laptop, liquid)"));
  CHECK(r.groups[2].classes.front().size() == 2);
  REQUIRE(r.tally.size() == 2);
  CHECK(r.tally[0].size() == 2);
  CHECK(r.tally[1].size() == 1);

  std::size_t syntax = 0;
  for (const auto& d : r.discarded) {
    if (d.reason != Discarded::Reason::SyntaxError) continue;
    ++syntax;
    CHECK(d.group == "group-3");
    CHECK(d.text.find("∃") != std::string::npos);
    CHECK_FALSE(d.detail.empty());
  }
  CHECK(syntax == 1);
}

TEST_CASE("vote: intra-group examples") {
  const GroupVote g = intra_group_vote(group("g", {"F p", "!G!p", "G q"}));
  CHECK(g.representative == P("F p"));
  CHECK(g.classes.front().size() == 2);
  REQUIRE(g.discarded.size() == 1);
  CHECK(g.discarded[0].reason == Discarded::Reason::MinorityClass);

  CHECK(intra_group_vote(group("one", {"G !x"})).representative == P("G !x"));
  CHECK_THROWS_AS(intra_group_vote(group("bad", {"G (", "∃x"})), AllCandidatesInvalid);
  CHECK_THROWS_AS(dual_layer_vote({group("bad", {"G ("})}), AllCandidatesInvalid);
  CHECK(dual_layer_vote({group("only", {"G !x"})}).winner == P("G !x"));
}

TEST_CASE("vote: inter-group examples") {
  const std::vector<Formula> reps{P("G !pour(b, l, c)"), P("G !pouredLiquid(l, liq)"), P("G !pouredLiquid(l, liq)")};
  CHECK(inter_group_vote(reps) == P("G !pouredLiquid(l, liq)"));
  CHECK(inter_group_vote(std::vector<Formula>{P("F x")}) == P("F x"));
}

TEST_CASE("vote: ties between inequivalent classes are permutation-independent") {
  std::vector<Formula> reps{P("G !c"), P("F a"), P("G !b")};
  const Formula first = inter_group_vote(reps);
  std::sort(reps.begin(), reps.end());
  do {
    CHECK(inter_group_vote(reps) == first);
  } while (std::next_permutation(reps.begin(), reps.end()));
  // Equal size: the smaller representative wins.
  CHECK(first == P("F a"));
}

TEST_CASE("vote: a coherent minority group still reaches the inter-group layer") {
  // Two groups agree internally on junk that is always violated; one group holds the real constraint.
  const std::vector<CandidateGroup> groups{
      group("junk-1", {"false", "G false", "X false", "G !real"}),
      group("junk-2", {"X false", "false", "F false", "G !real"}),
      group("good", {"G !real", "G !(real)", "G (!real & !real)", "false"}),
  };
  const VoteResult r = dual_layer_vote(groups);
  CHECK(r.groups[0].representative.is_false());
  CHECK(r.groups[1].representative.is_false());
  CHECK(r.groups[2].representative == P("G !real"));
  REQUIRE(r.tally.size() == 2);
  CHECK(r.tally[1].representative == P("G !real"));
  CHECK(r.tally[1].size() == 1);
  CHECK(r.winner.is_false());
}

TEST_CASE("property: determinism under permutations of candidates and groups") {
  std::vector<CandidateGroup> groups = laptop_groups();
  const Formula want = dual_layer_vote(groups).winner;
  std::mt19937_64 rng(43);
  for (int round = 0; round < 100; ++round) {
    for (auto& g : groups) std::shuffle(g.candidates.begin(), g.candidates.end(), rng);
    std::shuffle(groups.begin(), groups.end(), rng);
    REQUIRE(dual_layer_vote(groups).winner == want);
  }

  const auto alphabet = oracle::atoms({"a", "b"});
  oracle::FormulaGen gen(47, alphabet);
  for (int round = 0; round < 60; ++round) {
    std::vector<CandidateGroup> random;
    for (int g = 0; g < 3; ++g) {
      CandidateGroup cg{"g" + std::to_string(g), {}};
      for (int k = 0; k < 5; ++k) cg.candidates.push_back(gen.canonical(1 + (round + k) % 4).to_string());
      random.push_back(cg);
    }
    const Formula base = dual_layer_vote(random).winner;
    for (int perm = 0; perm < 10; ++perm) {
      for (auto& g : random) std::shuffle(g.candidates.begin(), g.candidates.end(), rng);
      std::shuffle(random.begin(), random.end(), rng);
      const VoteResult r = dual_layer_vote(random);
      REQUIRE(r.winner == base);
      // Winner membership.
      bool found = false;
      for (const auto& g : random)
        for (const auto& c : g.candidates) found = found || prefix_equivalent(P(c), r.winner);
      REQUIRE(found);
      std::size_t tally = 0;
      for (const auto& c : r.tally) tally += c.size();
      REQUIRE(tally == r.groups.size());
    }
  }
}

TEST_CASE("property: unparseable candidates never change the winner") {
  std::vector<CandidateGroup> groups = laptop_groups();
  const Formula want = dual_layer_vote(groups).winner;
  const std::vector<std::string> junk{"G (", "∃x. p", "p U", "& q", "F F F", "(((", "G !p(a,"};
  std::mt19937_64 rng(53);
  for (int round = 0; round < 50; ++round) {
    auto noisy = groups;
    for (auto& g : noisy)
      for (int k = 0; k < 3; ++k) g.candidates.push_back(junk[rng() % junk.size()]);
    const VoteResult r = dual_layer_vote(noisy);
    REQUIRE(r.winner == want);
  }
}

TEST_CASE("property: a class with a strict majority in every group wins") {
  const auto alphabet = oracle::atoms({"a", "b"});
  oracle::FormulaGen gen(59, alphabet);
  std::mt19937_64 rng(60);
  for (int round = 0; round < 60; ++round) {
    const Formula target = gen.canonical(3);
    std::vector<CandidateGroup> groups;
    for (int g = 0; g < 3; ++g) {
      CandidateGroup cg{"g" + std::to_string(g), {}};
      for (int k = 0; k < 3; ++k) cg.candidates.push_back(target.to_string());
      for (int k = 0; k < 2; ++k) cg.candidates.push_back(gen.canonical(1 + static_cast<int>(rng() % 4)).to_string());
      groups.push_back(cg);
    }
    REQUIRE(prefix_equivalent(dual_layer_vote(groups).winner, target));
  }
}

TEST_CASE("vote: a global majority can lose to a group majority") {
  // A holds 9 of 15 candidates, but B wins two of three groups.
  std::vector<CandidateGroup> groups{
      group("g1", {"G !a", "G !a", "G !a", "G !a", "G !a"}),
      group("g2", {"F b", "F b", "F b", "G !a", "G !a"}),
      group("g3", {"F b", "F b", "F b", "G !a", "G !a"}),
  };
  CHECK(dual_layer_vote(groups).winner == P("F b"));
}

TEST_CASE("vote: alphabet cap") {
  std::string wide = "G !(w0";
  for (int i = 1; i < 13; ++i) wide += " | w" + std::to_string(i);
  wide += ")";
  const GroupVote g = intra_group_vote(group("g", {wide, "G !w0"}));
  CHECK(g.representative == P("G !w0"));
  REQUIRE(g.discarded.size() == 1);
  CHECK(g.discarded[0].reason == Discarded::Reason::AlphabetCap);
}
