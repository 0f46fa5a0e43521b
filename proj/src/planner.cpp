#include "safeplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <tuple>
#include <unordered_set>

#include "safeplan/error.hpp"

namespace safeplan {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::PlanFound: return "plan_found";
    case Outcome::UnsafeRefused: return "unsafe_refused";
    case Outcome::Unsolvable: return "unsolvable";
  }
  return "";
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  expanded += o.expanded;
  generated += o.generated;
  pruned_ltl += o.pruned_ltl;
  pruned_closed += o.pruned_closed;
  wall_time_ms += o.wall_time_ms;
  exhausted = exhausted || o.exhausted;
  return *this;
}

std::vector<std::string> Plan::names(const PlanningTask& task) const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (auto i : steps) out.push_back(task.actions.at(i).name());
  return out;
}

Plan SequenceResult::concatenated() const {
  Plan all;
  for (const auto& p : plans) all.steps.insert(all.steps.end(), p.steps.begin(), p.steps.end());
  return all;
}

std::size_t heuristic_goal_count(const AtomSet& state, const Condition& goal) {
  if (goal.kind != Condition::Kind::And) return eval_condition(state, goal) ? 0 : 1;
  std::size_t unmet = 0;
  for (const auto& c : goal.children) {
    if (!eval_condition(state, c)) ++unmet;
  }
  return unmet;
}

namespace {

struct Node {
  AtomSet state;
  Formula residual;
  std::size_t parent;
  std::size_t action;
  std::size_t cost;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct ClosedEntry {
  AtomSet state;
  Formula residual;
  bool operator==(const ClosedEntry&) const = default;
};

struct ClosedHash {
  std::size_t operator()(const ClosedEntry& e) const noexcept { return hash_combine(e.state.hash(), e.residual.hash()); }
};

// (f, tiebreak, node index); smallest first
using OpenEntry = std::tuple<std::size_t, std::size_t, std::size_t>;

}  // namespace

SearchResult astar_ltl_from(const PlanningTask& task, const AtomSet& start, const Formula& residual,
                            const Condition& goal, const SearchOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult result;
  auto finish = [&] {
    result.stats.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };
  if (residual.is_false()) return finish();

  auto h = [&](const AtomSet& s) -> std::size_t {
    return options.heuristic == Heuristic::Zero ? 0 : heuristic_goal_count(s, goal);
  };
  auto key = [&](const AtomSet& s, const Formula& r) {
    return ClosedEntry{s, options.closed_key == ClosedKey::StateOnly ? Formula::truth() : r};
  };

  std::vector<Node> nodes;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  std::unordered_set<ClosedEntry, ClosedHash> closed;
  std::size_t counter = 0;
  nodes.push_back({start, residual, kNoParent, 0, 0});
  open.emplace(h(start), counter++, 0);

  auto& stats = result.stats;
  while (!open.empty() && stats.expanded < options.max_expansions) {
    const std::size_t idx = std::get<2>(open.top());
    open.pop();
    if (!closed.insert(key(nodes[idx].state, nodes[idx].residual)).second) {
      ++stats.pruned_closed;
      continue;
    }
    ++stats.expanded;
    if (options.on_expand) options.on_expand(nodes[idx].state, nodes[idx].residual);
    if (eval_condition(nodes[idx].state, goal)) {
      Plan plan;
      for (std::size_t i = idx; nodes[i].parent != kNoParent; i = nodes[i].parent) plan.steps.push_back(nodes[i].action);
      std::reverse(plan.steps.begin(), plan.steps.end());
      result.plan = std::move(plan);
      result.final_state = nodes[idx].state;
      result.final_residual = nodes[idx].residual;
      return finish();
    }
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      const GroundAction& act = task.actions[a];
      // `nodes` may reallocate below; read the parent by index each time.
      if (!applicable(nodes[idx].state, act)) continue;
      AtomSet next = apply(nodes[idx].state, act);
      ++stats.generated;
      Formula r = progress(nodes[idx].residual, next);
      if (r.is_false()) {
        ++stats.pruned_ltl;
        continue;
      }
      if (closed.contains(key(next, r))) {
        ++stats.pruned_closed;
        continue;
      }
      const std::size_t cost = nodes[idx].cost + 1;
      const std::size_t f = cost + h(next);
      nodes.push_back({std::move(next), std::move(r), idx, a, cost});
      open.emplace(f, counter++, nodes.size() - 1);
    }
  }
  stats.exhausted = !open.empty();
  return finish();
}

SearchResult astar_ltl(const PlanningTask& task, const Formula& constraints, const SearchOptions& options) {
  return astar_ltl_from(task, task.init, progress(simplify(constraints), task.init), task.goal, options);
}

SequenceResult plan_sequence(const PlanningTask& task, const AtomSet& init, const std::vector<Condition>& goals,
                             const Formula& constraints, const SearchOptions& options) {
  SequenceResult out;
  AtomSet state = init;
  const Formula phi = simplify(constraints);
  Formula residual = progress(phi, init);
  for (std::size_t k = 0; k < goals.size(); ++k) {
    SearchResult r = astar_ltl_from(task, state, residual, goals[k], options);
    out.stats += r.stats;
    if (!r.plan) {
      out.failed_goal = k + 1;
      // Classify the failed sub-task from the same state without constraints.
      const SearchResult free = astar_ltl_from(task, state, Formula::truth(), goals[k], options);
      out.stats += free.stats;
      out.failure = (free.plan && !phi.is_true()) ? Outcome::UnsafeRefused : Outcome::Unsolvable;
      return out;
    }
    state = std::move(r.final_state);
    residual = std::move(r.final_residual);
    out.plans.push_back(std::move(*r.plan));
  }
  return out;
}

namespace {

PlanCheck fail(PlanCheck::Failure kind, std::size_t step, std::string msg) {
  PlanCheck c;
  c.failure = kind;
  c.step = step;
  c.diagnostic = std::move(msg);
  return c;
}

}  // namespace

PlanCheck validate_plan(const PlanningTask& task, const Formula& constraints, const Plan& plan) {
  AtomSet state = task.init;
  Formula residual = progress(simplify(constraints), state);
  if (residual.is_false())
    return fail(PlanCheck::Failure::InitialState, 0, "initial state " + state.to_string() + " violates the constraints");
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.steps[i] >= task.actions.size()) throw UnknownAction(i + 1, "#" + std::to_string(plan.steps[i]));
    const GroundAction& a = task.actions[plan.steps[i]];
    if (!applicable(state, a))
      return fail(PlanCheck::Failure::Precondition, i + 1,
                  "step " + std::to_string(i + 1) + " " + a.name() + ": precondition " + a.pre.to_pddl() +
                      " does not hold");
    state = apply(state, a);
    residual = progress(residual, state);
    if (residual.is_false())
      return fail(PlanCheck::Failure::Constraint, i + 1,
                  "step " + std::to_string(i + 1) + " " + a.name() + ": constraint violated in " + state.to_string());
  }
  if (!eval_condition(state, task.goal))
    return fail(PlanCheck::Failure::Goal, plan.steps.size(),
                "goal " + task.goal.to_pddl() + " does not hold after the last step");
  PlanCheck ok;
  ok.valid = true;
  ok.step = plan.steps.size();
  return ok;
}

PlanCheck validate_plan(const PlanningTask& task, const Formula& constraints, const std::vector<std::string>& plan) {
  Plan p;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    auto idx = task.find_action(plan[i]);
    if (!idx) throw UnknownAction(i + 1, plan[i]);
    p.steps.push_back(*idx);
  }
  return validate_plan(task, constraints, p);
}

}  // namespace safeplan
