#include "safeplan/report.hpp"

#include <cmath>

namespace safeplan {

namespace {

// Milliseconds with three decimals keep reports readable.
double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

void put_counters(Json& j, const SearchStats& s) {
  j["expanded"] = s.expanded;
  j["generated"] = s.generated;
  j["pruned_ltl"] = s.pruned_ltl;
  j["pruned_closed"] = s.pruned_closed;
}

Json class_json(const EquivalenceClass& c) {
  Json members = Json::array();
  for (const auto& m : c.members) members.push_back(m.to_string());
  return Json{{"representative", c.representative.to_string()}, {"size", c.size()}, {"members", members}};
}

}  // namespace

Json to_json(const SearchStats& s) {
  Json j;
  put_counters(j, s);
  j["wall_time_ms"] = round_ms(s.wall_time_ms);
  j["exhausted"] = s.exhausted;
  return j;
}

Json to_json(const PlanningTask& task, const SafetyVerdict& v) {
  Json j;
  j["result"] = std::string(to_string(v.tag));
  put_counters(j, v.constrained);
  j["plan"] = v.plan ? Json(v.plan->names(task)) : Json::array();
  j["plan_length"] = v.plan ? Json(v.plan->length()) : Json(nullptr);
  j["wall_time_ms"] = round_ms(v.constrained.wall_time_ms);
  j["exhausted"] = v.constrained.exhausted;
  if (v.unconstrained) j["unconstrained"] = to_json(*v.unconstrained);
  return j;
}

Json to_json(const PlanCheck& c) {
  static const char* kinds[] = {"none", "initial_state", "precondition", "constraint", "goal"};
  Json j;
  j["valid"] = c.valid;
  j["failure"] = kinds[static_cast<int>(c.failure)];
  j["step"] = c.step;
  j["diagnostic"] = c.diagnostic;
  return j;
}

Json to_json(const VoteResult& v) {
  Json j;
  j["winner"] = v.winner.to_string();
  Json groups = Json::array();
  for (const auto& g : v.groups) {
    Json classes = Json::array();
    for (const auto& c : g.classes) classes.push_back(class_json(c));
    groups.push_back(Json{{"group", g.group}, {"representative", g.representative.to_string()}, {"classes", classes}});
  }
  j["groups"] = groups;
  Json tally = Json::array();
  for (const auto& c : v.tally) tally.push_back(class_json(c));
  j["tally"] = tally;
  Json discarded = Json::array();
  for (const auto& d : v.discarded) {
    Json e{{"group", d.group}, {"text", d.text}, {"reason", std::string(to_string(d.reason))}};
    if (!d.detail.empty()) e["detail"] = d.detail;
    discarded.push_back(e);
  }
  j["discarded"] = discarded;
  return j;
}

Json to_json(const ConstraintStore& store) {
  static const char* statuses[] = {"representative", "duplicate", "quarantined"};
  Json j;
  j["total"] = store.total();
  j["unique"] = store.unique();
  j["conflicts_detected"] = store.conflicts_detected();
  j["conflicts_resolved"] = store.conflicts_resolved();
  Json entries = Json::array();
  for (const auto& e : store.entries()) {
    Json x{{"added", e.added_at},
           {"status", statuses[static_cast<int>(e.status)]},
           {"source", e.source},
           {"formula", e.formula.to_string()}};
    if (e.forced) x["forced"] = true;
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

}  // namespace safeplan
