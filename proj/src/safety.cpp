#include "safeplan/safety.hpp"

namespace safeplan {

SafetyVerdict classify(const PlanningTask& task, const std::vector<Formula>& constraints,
                       const SearchOptions& options) {
  SafetyVerdict v;
  SearchResult first = astar_ltl(task, conjoin(constraints), options);
  v.constrained = first.stats;
  if (first.plan) {
    v.tag = Outcome::PlanFound;
    v.plan = std::move(first.plan);
    return v;
  }
  if (!constraints.empty()) {
    SearchResult retry = astar_ltl(task, Formula::truth(), options);
    v.unconstrained = retry.stats;
    v.tag = retry.plan ? Outcome::UnsafeRefused : Outcome::Unsolvable;
    return v;
  }
  v.tag = Outcome::Unsolvable;
  return v;
}

SafetyVerdict classify(const std::string& domain_text, const std::string& problem_text,
                       const std::vector<std::string>& constraint_texts, const SearchOptions& options) {
  const Domain domain = parse_domain(domain_text);
  const Problem problem = parse_problem(problem_text, domain);
  const PlanningTask task = ground(domain, problem);
  std::vector<Formula> constraints;
  constraints.reserve(constraint_texts.size());
  for (const auto& t : constraint_texts) constraints.push_back(parse_ltl(t));
  return classify(task, constraints, options);
}

}  // namespace safeplan
