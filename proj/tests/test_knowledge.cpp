#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"
#include "safeplan/knowledge.hpp"
#include "safeplan/planner.hpp"
#include "support/oracles.hpp"
#include "support/replay47.hpp"

using namespace safeplan;

namespace {

Formula P(const std::string& s) { return parse_ltl(s); }

bool conflicting(std::initializer_list<const char*> texts) {
  std::vector<Formula> fs;
  for (const char* t : texts) fs.push_back(P(t));
  return is_conflicting(fs);
}

// Some satisfying lasso of length ≤ 2 + 2 over the formulas' atoms, by enumeration.
bool satisfiable_by_enumeration(const std::vector<Formula>& fs) {
  const auto alphabet = atoms_of(fs);
  const Formula f = conjoin(fs);
  const std::uint32_t letters = 1u << alphabet.size();
  for (std::uint32_t a = 0; a < letters; ++a)
    for (std::uint32_t b = 0; b < letters; ++b)
      for (std::uint32_t c = 0; c < letters; ++c) {
        const AtomSet x = oracle::letter(alphabet, a), y = oracle::letter(alphabet, b), z = oracle::letter(alphabet, c);
        if (oracle::holds(f, {}, {x}) || oracle::holds(f, {x}, {y}) || oracle::holds(f, {x, y}, {z}) ||
            oracle::holds(f, {x}, {y, z}))
          return true;
      }
  return false;
}

}  // namespace

TEST_CASE("is_conflicting: examples") {
  CHECK(conflicting({"G !p", "G p"}));
  CHECK_FALSE(conflicting({"G !p", "F q"}));
  CHECK(conflicting({"F p", "G !p"}));
  CHECK_FALSE(conflicting({}));
  CHECK_FALSE(conflicting({"G !p"}));
  CHECK(conflicting({"false"}));
  CHECK(conflicting({"p", "X !p", "G (p -> X p)"}));
  CHECK_FALSE(conflicting({"G F p", "G F !p"}));
  CHECK(conflicting({"G !q", "p U q"}));
  // Progression collapses these residuals, so a letter-blind cycle search misses the model.
  CHECK_FALSE(conflicting({"G F F X b"}));
  CHECK_FALSE(conflicting({"G F a", "G F b", "G !(a & b)"}));
  CHECK(conflicting({"G F a", "F G !a"}));
  CHECK_FALSE(conflicting({"F G a", "G F a"}));
}

TEST_CASE("property: is_conflicting agrees with lasso enumeration") {
  const auto alphabet = oracle::atoms({"a", "b"});
  oracle::FormulaGen gen(31, alphabet);
  std::size_t yes = 0, no = 0;
  for (int i = 0; i < 800; ++i) {
    const std::vector<Formula> fs{gen.canonical(1 + i % 5), gen.canonical(1 + (i / 5) % 5)};
    const bool want = !satisfiable_by_enumeration(fs);
    REQUIRE_MESSAGE(is_conflicting(fs) == want, fs[0].to_string() << " ; " << fs[1].to_string());
    ++(want ? yes : no);
  }
  CHECK(yes > 20);
  CHECK(no > 20);
}

TEST_CASE("store: examples") {
  ConstraintStore s;
  CHECK(s.active().is_true());
  CHECK(s.add(P("G !p"), "a") == AddOutcome::AddedNew);
  CHECK(s.add(P("G !p"), "b") == AddOutcome::MergedDuplicate);
  CHECK(s.unique() == 1);
  CHECK(s.total() == 2);
  CHECK(s.add(P("G p"), "c") == AddOutcome::Conflict);
  CHECK(s.conflicts_detected() == 1);
  CHECK(s.conflicts_resolved() == 1);
  CHECK(s.unique() == 1);
  CHECK(s.total() == 3);
  CHECK(s.add(P("G !q")) == AddOutcome::AddedNew);
  CHECK(s.active() == P("G !p & G !q"));
  CHECK(s.entries()[2].status == StoreEntry::Status::Quarantined);
  CHECK(s.entries()[1].status == StoreEntry::Status::Duplicate);
}

TEST_CASE("store: 47-addition replay") {
  ConstraintStore s;
  std::size_t outcomes[3] = {0, 0, 0};
  for (const auto& [text, source] : replay47::script()) ++outcomes[static_cast<int>(s.add(P(text), source))];
  CHECK(s.total() == 47);
  CHECK(s.unique() == 34);
  CHECK(s.conflicts_detected() == 1);
  CHECK(outcomes[0] == 34);
  CHECK(outcomes[1] == 12);
  CHECK(outcomes[2] == 1);
  const Formula active = s.active();
  REQUIRE(active.op() == LtlOp::And);
  CHECK(active.children().size() == 34);
  CHECK(s.representatives().size() == 34);
}

TEST_CASE("property: dedup idempotence") {
  ConstraintStore s;
  for (const auto& [text, source] : replay47::script()) s.add(P(text), source);
  const auto entries = s.entries();
  for (const auto& e : entries) {
    if (e.status != StoreEntry::Status::Representative) continue;
    const std::size_t unique = s.unique();
    const Formula active = s.active();
    REQUIRE(s.add(e.formula, "again") == AddOutcome::MergedDuplicate);
    REQUIRE(s.unique() == unique);
    REQUIRE(s.active() == active);
  }
}

TEST_CASE("property: unique count is order-insensitive over ≥ 100 shuffles") {
  std::vector<std::pair<std::string, std::string>> clean;
  for (const auto& entry : replay47::script())
    if (entry.second != replay47::kConflictSource) clean.push_back(entry);
  REQUIRE(clean.size() == 46);
  std::mt19937_64 rng(37);
  for (int round = 0; round < 120; ++round) {
    std::shuffle(clean.begin(), clean.end(), rng);
    ConstraintStore s;
    for (const auto& [text, source] : clean) REQUIRE(s.add(P(text), source) != AddOutcome::Conflict);
    REQUIRE(s.unique() == 34);
    REQUIRE(s.total() == 46);
  }
}

TEST_CASE("property: representatives stay pairwise inequivalent and jointly satisfiable") {
  const auto alphabet = oracle::atoms({"a", "b", "c"});
  oracle::FormulaGen gen(41, alphabet);
  for (int round = 0; round < 40; ++round) {
    ConstraintStore s;
    for (int k = 0; k < 8; ++k) s.add(gen.canonical(1 + (round + k) % 5), "gen");
    const auto reps = s.representatives();
    REQUIRE_FALSE(is_conflicting(reps));
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) REQUIRE_FALSE(prefix_equivalent(reps[i], reps[j]));
    REQUIRE(s.total() >= s.unique());
  }
}

TEST_CASE("property: monotone restriction on random tasks") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const oracle::RandTask rt = oracle::random_task(seed);
    const Domain d = parse_domain(rt.domain_pddl());
    const PlanningTask t = ground(d, parse_problem(rt.problem_pddl(), d));
    // Candidate additions drawn from the task's own atoms.
    std::vector<std::string> candidates;
    for (const auto& a : rt.atoms) {
      candidates.push_back("G !" + a.to_string());
      candidates.push_back("F " + a.to_string());
    }
    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);

    std::vector<std::vector<std::size_t>> plans;
    std::vector<std::size_t> plan;
    auto rec = [&](auto& self) -> void {
      plans.push_back(plan);
      if (plan.size() == 3) return;
      for (std::size_t a = 0; a < t.actions.size(); ++a) {
        plan.push_back(a);
        self(self);
        plan.pop_back();
      }
    };
    rec(rec);

    ConstraintStore s;
    auto accepted = [&] {
      std::set<std::vector<std::size_t>> out;
      const Formula active = s.active();
      for (const auto& p : plans)
        if (validate_plan(t, active, Plan{p})) out.insert(p);
      return out;
    };
    std::set<std::vector<std::size_t>> before = accepted();
    for (std::size_t k = 0; k < std::min<std::size_t>(candidates.size(), 4); ++k) {
      if (s.add(P(candidates[k]), "kb") != AddOutcome::AddedNew) continue;
      const auto after = accepted();
      REQUIRE(std::includes(before.begin(), before.end(), after.begin(), after.end()));
      before = after;
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("store: serialize round trip") {
  ConstraintStore s;
  for (const auto& [text, source] : replay47::script()) s.add(P(text), source);
  s.force(P("G !forced(x)"), "manual");
  const std::string text = s.serialize();
  const ConstraintStore back = ConstraintStore::deserialize(text);
  CHECK(back.total() == s.total());
  CHECK(back.unique() == s.unique());
  CHECK(back.conflicts_detected() == s.conflicts_detected());
  CHECK(back.active() == s.active());
  REQUIRE(back.entries().size() == s.entries().size());
  for (std::size_t i = 0; i < s.entries().size(); ++i) {
    CHECK(back.entries()[i].formula == s.entries()[i].formula);
    CHECK(back.entries()[i].status == s.entries()[i].status);
    CHECK(back.entries()[i].source == s.entries()[i].source);
    CHECK(back.entries()[i].forced == s.entries()[i].forced);
  }
  CHECK(back.serialize() == text);
  // Only representative formulas appear as bare lines.
  CHECK(formula_lines(text).size() == s.unique());
}

TEST_CASE("store: hand-written file and formula_lines") {
  const ConstraintStore s = ConstraintStore::deserialize("# comment\nG !p\n\n  F q  \n");
  CHECK(s.unique() == 2);
  CHECK(formula_lines("# a\n\n  G !p \n#= x\nF q\n") == std::vector<std::string>{"G !p", "F q"});
}

TEST_CASE("store: alphabet cap and force") {
  std::string big = "G !p0";
  for (int i = 1; i < 13; ++i) big += " & G !p" + std::to_string(i);
  std::string joined = "G (p0";
  for (int i = 1; i < 13; ++i) joined += " | p" + std::to_string(i);
  joined += ")";
  ConstraintStore s;
  CHECK_THROWS_AS(s.add(P(joined)), AlphabetTooLarge);
  CHECK(s.total() == 0);
  s.force(P(joined), "manual");
  CHECK(s.entries().back().forced);
  CHECK(s.unique() == 1);
  // Disjoint components keep working past 12 atoms in total.
  ConstraintStore wide;
  for (int i = 0; i < 20; ++i) CHECK(wide.add(P("G !w" + std::to_string(i))) == AddOutcome::AddedNew);
  CHECK(wide.add(P("F w3")) == AddOutcome::Conflict);
}
