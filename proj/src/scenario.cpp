#include "safeplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "safeplan/error.hpp"
#include "safeplan/knowledge.hpp"
#include "safeplan/safety.hpp"
#include "safeplan/scene.hpp"

namespace safeplan {

namespace {

struct IoError : Error {
  using Error::Error;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_expectations(const Json& expected, ScenarioRow& row) {
  auto mismatch = [&](const std::string& what, const std::string& want, const std::string& got) {
    row.mismatches.push_back(what + ": expected " + want + ", got " + got);
  };
  if (expected.contains("tag")) {
    const auto want = expected["tag"].get<std::string>();
    const std::string got(to_string(*row.tag));
    if (want != got) mismatch("tag", want, got);
  }
  if (expected.contains("plan_length")) {
    const auto& want = expected["plan_length"];
    const std::string got = row.plan ? std::to_string(row.plan->size()) : "null";
    if (want.dump() != got) mismatch("plan_length", want.dump(), got);
  }
  const std::pair<const char*, std::size_t> counters[] = {{"expanded", row.stats.expanded},
                                                          {"generated", row.stats.generated},
                                                          {"pruned_ltl", row.stats.pruned_ltl},
                                                          {"pruned_closed", row.stats.pruned_closed}};
  for (const auto& [name, value] : counters) {
    if (expected.contains(name) && expected[name].get<std::size_t>() != value)
      mismatch(name, expected[name].dump(), std::to_string(value));
  }
  if (expected.contains("pruned_ltl_min") && row.stats.pruned_ltl < expected["pruned_ltl_min"].get<std::size_t>())
    mismatch("pruned_ltl_min", expected["pruned_ltl_min"].dump(), std::to_string(row.stats.pruned_ltl));
  row.passed = row.mismatches.empty();
}

void run_one(const Json& spec, const std::filesystem::path& base, const SearchOptions& options, ScenarioRow& row) {
  if (spec.contains("problem") == spec.contains("scene"))
    throw Error("scenario needs exactly one of \"problem\" and \"scene\"");
  const Domain domain = parse_domain(slurp(base / spec.at("domain").get<std::string>()));

  std::vector<Formula> constraints;
  for (const auto& path : spec.value("constraints", Json::array())) {
    for (const auto& line : formula_lines(slurp(base / path.get<std::string>()))) constraints.push_back(parse_ltl(line));
  }
  row.constrained = !constraints.empty();

  Problem problem;
  if (spec.contains("problem")) {
    problem = parse_problem(slurp(base / spec["problem"].get<std::string>()), domain);
  } else {
    const SceneInit scene = scene_to_init(parse_scene(slurp(base / spec["scene"].get<std::string>())));
    problem = make_problem(domain, row.id, scene.objects, scene.init, Condition::constant(true));
  }
  std::vector<Condition> goals;
  if (spec.contains("goal")) goals.push_back(parse_goal(spec["goal"].get<std::string>(), domain, problem.objects));
  for (const auto& g : spec.value("goals", Json::array()))
    goals.push_back(parse_goal(g.get<std::string>(), domain, problem.objects));
  if (goals.empty() && spec.contains("scene")) throw Error("a scene scenario needs \"goal\" or \"goals\"");
  if (goals.size() == 1) problem.goal = goals.front();

  const PlanningTask task = ground(domain, problem);
  if (goals.size() <= 1) {
    const SafetyVerdict v = classify(task, constraints, options);
    row.tag = v.tag;
    row.stats = v.constrained;
    row.unconstrained = v.unconstrained;
    if (v.plan) row.plan = v.plan->names(task);
  } else {
    const SequenceResult s = plan_sequence(task, task.init, goals, conjoin(constraints), options);
    row.tag = s.failed_goal ? *s.failure : Outcome::PlanFound;
    row.stats = s.stats;
    if (!s.failed_goal) row.plan = s.concatenated().names(task);
  }
  if (spec.contains("expected")) check_expectations(spec["expected"], row);
}

ScenarioRow failed_row(std::string id, std::string status, std::string error) {
  ScenarioRow row;
  row.id = std::move(id);
  row.status = std::move(status);
  row.error = std::move(error);
  return row;
}

std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "-"; }

}  // namespace

bool ScenarioReport::ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ScenarioRow& r) { return r.status == "ok" && r.passed.value_or(true); });
}

Json ScenarioReport::to_json() const {
  Json list = Json::array();
  std::size_t passed = 0, failed = 0, errors = 0;
  for (const auto& r : rows) {
    Json j;
    j["id"] = r.id;
    j["status"] = r.status;
    if (r.status != "ok") {
      j["error"] = r.error;
      ++errors;
      list.push_back(j);
      continue;
    }
    j["ltl"] = r.constrained;
    j["result"] = std::string(to_string(*r.tag));
    const Json stats = safeplan::to_json(r.stats);
    for (const auto& [k, v] : stats.items()) j[k] = v;
    j["plan"] = r.plan ? Json(*r.plan) : Json::array();
    j["plan_length"] = r.plan ? Json(r.plan->size()) : Json(nullptr);
    if (r.unconstrained) j["unconstrained"] = safeplan::to_json(*r.unconstrained);
    if (r.passed) {
      j["check"] = *r.passed ? "pass" : "fail";
      if (!r.mismatches.empty()) j["mismatches"] = r.mismatches;
      ++(*r.passed ? passed : failed);
    }
    list.push_back(j);
  }
  Json out;
  out["scenarios"] = list;
  out["summary"] = Json{{"total", rows.size()}, {"passed", passed}, {"failed", failed}, {"errors", errors}};
  return out;
}

std::string ScenarioReport::table() const {
  const std::vector<std::string> header{"Scenario", "LTL", "Result", "Exp.", "Gen.", "Pruned", "|π|", "Check"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    if (r.status != "ok") {
      cells.push_back({r.id, "", r.status, "", "", "", "", "error"});
      continue;
    }
    cells.push_back({r.id, r.constrained ? "yes" : "no", std::string(to_string(*r.tag)), std::to_string(r.stats.expanded),
                     std::to_string(r.stats.generated), std::to_string(r.stats.pruned_ltl),
                     cell(r.plan ? std::optional<std::size_t>(r.plan->size()) : std::nullopt),
                     r.passed ? (*r.passed ? "pass" : "fail") : ""});
  }
  // Display width: "|π|" is three columns but four bytes.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));
  std::ostringstream out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const bool numeric = i >= 3 && i <= 6;
      const std::string pad(widths[i] - width(row[i]), ' ');
      line += (i ? "  " : "") + (numeric ? pad + row[i] : row[i] + pad);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  return out.str();
}

ScenarioReport run_scenarios(const std::filesystem::path& manifest, const SearchOptions& options) {
  Json doc;
  try {
    doc = Json::parse(slurp(manifest));
  } catch (const Json::parse_error& e) {
    throw Error("manifest " + manifest.string() + ": " + e.what());
  }
  const auto base = manifest.parent_path();
  ScenarioReport report;
  const Json scenarios = doc.is_object() ? doc.value("scenarios", Json::array()) : Json::array();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Json& spec = scenarios[i];
    ScenarioRow row;
    row.id = spec.is_object() ? spec.value("id", "scenario-" + std::to_string(i + 1)) : "scenario-" + std::to_string(i + 1);
    try {
      run_one(spec, base, options, row);
    } catch (const IoError& e) {
      row = failed_row(row.id, "io_error", e.what());
    } catch (const std::exception& e) {
      row = failed_row(row.id, "error", e.what());
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ScenarioRow& a, const ScenarioRow& b) { return a.id < b.id; });
  return report;
}

}  // namespace safeplan
