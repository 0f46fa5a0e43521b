#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "safeplan/error.hpp"
#include "safeplan/knowledge.hpp"
#include "safeplan/safety.hpp"
#include "support/oracles.hpp"

using namespace safeplan;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SAFEPLAN_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SearchOptions optimal() {
  SearchOptions o;
  o.heuristic = Heuristic::Zero;
  return o;
}

void check_trichotomy(const SafetyVerdict& v, bool constrained) {
  CHECK(v.plan.has_value() == (v.tag == Outcome::PlanFound));
  if (v.tag == Outcome::UnsafeRefused) {
    CHECK(constrained);
    REQUIRE(v.unconstrained);
  }
  if (v.tag == Outcome::PlanFound) CHECK_FALSE(v.unconstrained);
  if (!constrained) CHECK_FALSE(v.unconstrained);
}

}  // namespace

TEST_CASE("classify: pour task") {
  const std::string d = slurp("kitchen_domain.pddl");
  const std::string p = slurp("pour_problem.pddl");
  const SafetyVerdict free = classify(d, p, {}, optimal());
  CHECK(free.tag == Outcome::PlanFound);
  REQUIRE(free.plan);
  CHECK(free.plan->length() == 4);
  check_trichotomy(free, false);

  const SafetyVerdict refused = classify(d, p, formula_lines(slurp("laptop.ltl")), optimal());
  CHECK(refused.tag == Outcome::UnsafeRefused);
  CHECK(refused.constrained.pruned_ltl >= 1);
  check_trichotomy(refused, true);
  REQUIRE(refused.unconstrained);
  CHECK(refused.unconstrained->expanded == free.constrained.expanded);
}

TEST_CASE("classify: unreachable goal without constraints skips the retry") {
  const std::string d = R"(
(define (domain lock)
  (:predicates (isOpen ?x) (seen ?x))
  (:action look :parameters (?x) :effect (seen ?x)))
)";
  const std::string p = "(define (problem q) (:domain lock) (:objects x) (:init) (:goal (isOpen x)))";
  const SafetyVerdict v = classify(d, p, {}, optimal());
  CHECK(v.tag == Outcome::Unsolvable);
  CHECK_FALSE(v.unconstrained);
  check_trichotomy(v, false);

  const SafetyVerdict w = classify(d, p, {"G !seen(x)"}, optimal());
  CHECK(w.tag == Outcome::Unsolvable);
  CHECK(w.unconstrained);
}

TEST_CASE("classify: errors propagate") {
  CHECK_THROWS_AS(classify("(define (domain", "", {}), PddlSyntaxError);
  CHECK_THROWS_AS(classify(slurp("kitchen_domain.pddl"), slurp("pour_problem.pddl"), {"G !"}), LtlSyntaxError);
}

TEST_CASE("classify: tag agrees with the constrained and unconstrained BFS oracles") {
  std::size_t conclusive = 0;
  std::size_t tags[3] = {0, 0, 0};
  for (std::uint64_t seed = 1000; seed < 1400; ++seed) {
    const oracle::RandTask rt = oracle::random_task(seed);
    const oracle::BfsAnswer with = oracle::bfs(rt, rt.constraint);
    const oracle::BfsAnswer without = oracle::bfs(rt, {});
    if (!with.conclusive || !without.conclusive) continue;
    ++conclusive;
    const Outcome want = with.shortest      ? Outcome::PlanFound
                         : without.shortest ? Outcome::UnsafeRefused
                                            : Outcome::Unsolvable;
    const SafetyVerdict v = classify(rt.domain_pddl(), rt.problem_pddl(), {rt.constraint_text()}, optimal());
    INFO("seed " << seed << " phi " << rt.constraint_text());
    REQUIRE(v.tag == want);
    check_trichotomy(v, true);
    if (v.plan) CHECK(v.plan->length() == *with.shortest);
    ++tags[static_cast<int>(want)];
  }
  CHECK(conclusive >= 200);
  // The corpus exercises all three outcomes.
  CHECK(tags[0] > 0);
  CHECK(tags[1] > 0);
  CHECK(tags[2] > 0);
}
