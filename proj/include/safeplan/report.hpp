#pragma once

#include <string>

#include <json.hpp>

#include "safeplan/knowledge.hpp"
#include "safeplan/planner.hpp"
#include "safeplan/safety.hpp"
#include "safeplan/voting.hpp"

namespace safeplan {

using Json = nlohmann::ordered_json;

Json to_json(const SearchStats& stats);

/// Flat stats object with `result`, the plan and its length; the retry
/// without constraints, when it ran, is nested under `unconstrained`.
Json to_json(const PlanningTask& task, const SafetyVerdict& verdict);

Json to_json(const PlanCheck& check);
Json to_json(const VoteResult& vote);
Json to_json(const ConstraintStore& store);

}  // namespace safeplan
