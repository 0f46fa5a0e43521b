#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safeplan/ltl.hpp"
#include "safeplan/pddl.hpp"

namespace safeplan {

inline constexpr std::size_t kDefaultMaxExpansions = 100000;

enum class Outcome { PlanFound, UnsafeRefused, Unsolvable };

std::string_view to_string(Outcome o);

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t pruned_ltl = 0;
  std::size_t pruned_closed = 0;
  double wall_time_ms = 0.0;
  /// The search stopped at max_expansions with OPEN still nonempty.
  bool exhausted = false;

  SearchStats& operator+=(const SearchStats& other);
};

enum class Heuristic {
  GoalCount,
  /// h = 0; with unit costs the returned plans are shortest.
  Zero,
};

/// What the closed list is keyed on. StateOnly discards the residual and is
/// incomplete; it exists so tests can show why the residual belongs in the key.
enum class ClosedKey { StateAndResidual, StateOnly };

struct SearchOptions {
  Heuristic heuristic = Heuristic::GoalCount;
  std::size_t max_expansions = kDefaultMaxExpansions;
  ClosedKey closed_key = ClosedKey::StateAndResidual;
  /// Called for every expanded node with its state and residual.
  std::function<void(const AtomSet&, const Formula&)> on_expand;
};

struct Plan {
  /// Indices into PlanningTask::actions.
  std::vector<std::size_t> steps;

  std::size_t length() const { return steps.size(); }
  std::vector<std::string> names(const PlanningTask& task) const;
};

struct SearchResult {
  std::optional<Plan> plan;
  SearchStats stats;
  /// State and residual after replaying the plan; only set with a plan.
  AtomSet final_state;
  Formula final_residual;
};

/// Number of top-level conjuncts of `goal` that fail in `state`. A goal that
/// is not a conjunction counts as a single conjunct.
std::size_t heuristic_goal_count(const AtomSet& state, const Condition& goal);

/// A* over (state, residual) pairs. The initial state is progressed once
/// before search; each successor is progressed on entry and discarded when
/// its residual becomes false.
SearchResult astar_ltl(const PlanningTask& task, const Formula& constraints, const SearchOptions& options = {});

/// Same search, starting from an arbitrary state whose residual has already
/// been progressed through it.
SearchResult astar_ltl_from(const PlanningTask& task, const AtomSet& start, const Formula& residual,
                            const Condition& goal, const SearchOptions& options = {});

struct SequenceResult {
  /// One plan per solved goal, in order.
  std::vector<Plan> plans;
  /// 1-based index of the first goal that could not be reached.
  std::optional<std::size_t> failed_goal;
  /// Classification of the failed sub-task (UnsafeRefused or Unsolvable).
  std::optional<Outcome> failure;
  SearchStats stats;

  Plan concatenated() const;
};

/// Solves goals one after another, each from the end state of the previous
/// plan. The residual is carried across goal boundaries, so the constraint
/// applies to the whole concatenated trajectory.
SequenceResult plan_sequence(const PlanningTask& task, const AtomSet& init, const std::vector<Condition>& goals,
                             const Formula& constraints, const SearchOptions& options = {});

struct PlanCheck {
  enum class Failure { None, InitialState, Precondition, Constraint, Goal };

  bool valid = false;
  Failure failure = Failure::None;
  /// 1-based step of the failure; 0 for the initial state, plan length for
  /// an unmet goal.
  std::size_t step = 0;
  std::string diagnostic;

  explicit operator bool() const { return valid; }
};

/// Replays the plan with apply() and progress(). Throws UnknownAction when a
/// step names no ground action of the task.
PlanCheck validate_plan(const PlanningTask& task, const Formula& constraints, const std::vector<std::string>& plan);
PlanCheck validate_plan(const PlanningTask& task, const Formula& constraints, const Plan& plan);

}  // namespace safeplan
