#pragma once

#include <optional>
#include <string>
#include <vector>

#include "safeplan/ltl.hpp"
#include "safeplan/pddl.hpp"
#include "safeplan/planner.hpp"

namespace safeplan {

struct SafetyVerdict {
  Outcome tag = Outcome::Unsolvable;
  std::optional<Plan> plan;
  /// Stats of the search under the conjoined constraints.
  SearchStats constrained;
  /// Stats of the retry without constraints, when it ran.
  std::optional<SearchStats> unconstrained;
};

/// Plans under the conjunction of `constraints`; if that fails and there was
/// at least one constraint, retries unconstrained to tell an unsafe task
/// from an unsolvable one. Both searches use the same options.
SafetyVerdict classify(const PlanningTask& task, const std::vector<Formula>& constraints,
                       const SearchOptions& options = {});

/// Parses and grounds the inputs, then classifies. Parse and validation
/// errors propagate.
SafetyVerdict classify(const std::string& domain_text, const std::string& problem_text,
                       const std::vector<std::string>& constraint_texts, const SearchOptions& options = {});

}  // namespace safeplan
