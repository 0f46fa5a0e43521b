// safeplan command-line tool.
//
// Exit codes: 0 plan found or requested output produced, 2 unsafe_refused,
// 3 unsolvable, 1 error (including an invalid plan for `validate` and a
// failed expectation for `run`).

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"
#include "safeplan/knowledge.hpp"
#include "safeplan/planner.hpp"
#include "safeplan/report.hpp"
#include "safeplan/safety.hpp"
#include "safeplan/scenario.hpp"
#include "safeplan/voting.hpp"

namespace fs = std::filesystem;
using namespace safeplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnsafe = 2;
constexpr int kExitUnsolvable = 3;

struct Globals {
  bool json = false;
  std::size_t max_expansions = kDefaultMaxExpansions;
  bool optimal = false;
  std::uint64_t seed = 0;
  int similarity_depth = kDefaultSimilarityDepth;

  SearchOptions search() const {
    SearchOptions o;
    o.max_expansions = max_expansions;
    o.heuristic = optimal ? Heuristic::Zero : Heuristic::GoalCount;
    return o;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::PlanFound: return kExitOk;
    case Outcome::UnsafeRefused: return kExitUnsafe;
    case Outcome::Unsolvable: return kExitUnsolvable;
  }
  return kExitError;
}

std::vector<Formula> read_constraints(const std::vector<std::string>& files, const std::vector<std::string>& inline_) {
  std::vector<Formula> out;
  for (const auto& f : files) {
    for (const auto& line : formula_lines(slurp(f))) out.push_back(parse_ltl(line));
  }
  for (const auto& text : inline_) out.push_back(parse_ltl(text));
  return out;
}

// `p(a, b) q`, `{p(a, b), q}` and `(p a b) (q)` all name the same state.
AtomSet parse_state(std::string_view line) {
  AtomSet s;
  std::string_view rest = line;
  auto skip = [&] {
    while (!rest.empty() && (std::isspace(static_cast<unsigned char>(rest.front())) || rest.front() == ',' ||
                             rest.front() == '{' || rest.front() == '}'))
      rest.remove_prefix(1);
  };
  for (skip(); !rest.empty(); skip()) {
    std::size_t end = 0;
    if (rest.front() == '(') {
      end = rest.find(')');
      if (end == std::string_view::npos) throw Error("unbalanced '(' in state: " + std::string(line));
      ++end;
    } else {
      while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end])) && rest[end] != ',' &&
             rest[end] != '(' && rest[end] != '}')
        ++end;
      if (end < rest.size() && rest[end] == '(') {
        const auto close = rest.find(')', end);
        if (close == std::string_view::npos) throw Error("unbalanced '(' in state: " + std::string(line));
        end = close + 1;
      }
    }
    s.insert(parse_atom(rest.substr(0, end)));
    rest.remove_prefix(end);
  }
  return s;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_plan(const std::vector<std::string>& plan) {
  for (std::size_t i = 0; i < plan.size(); ++i) std::cout << "  " << (i + 1) << ". " << plan[i] << "\n";
}

void print_stats_line(const SearchStats& s) {
  std::cout << "expanded=" << s.expanded << " generated=" << s.generated << " pruned_ltl=" << s.pruned_ltl
            << " pruned_closed=" << s.pruned_closed << (s.exhausted ? " (expansion limit reached)" : "") << "\n";
}

struct TaskArgs {
  std::string domain;
  std::string problem;
  std::vector<std::string> ltl_files;
  std::vector<std::string> ltl_inline;

  void attach(CLI::App* app) {
    app->add_option("--domain", domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
    app->add_option("--problem", problem, "PDDL problem file")->required()->check(CLI::ExistingFile);
    app->add_option("--ltl", ltl_files, "Constraint file, one formula per line")->check(CLI::ExistingFile);
    app->add_option("--constraint", ltl_inline, "Constraint formula given inline");
  }

  PlanningTask task() const {
    const Domain d = parse_domain(slurp(domain));
    const Problem p = parse_problem(slurp(problem), d);
    return ground(d, p);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"safeplan: LTL-constrained planning, safety classification and constraint voting"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--max-expansions", g.max_expansions, "Expansion limit per search")->check(CLI::PositiveNumber);
  app.add_flag("--optimal", g.optimal, "Zero heuristic: shortest plans");
  app.add_option("--seed", g.seed, "Seed recorded with reports that involve randomized inputs");
  app.add_option("--similarity-depth", g.similarity_depth, "Trace depth for similarity")->check(CLI::PositiveNumber);
  app.fallthrough();

  int code = kExitOk;

  // plan
  TaskArgs plan_args;
  std::vector<std::string> plan_goals;
  auto* plan = app.add_subcommand("plan", "Search for a plan under the constraints");
  plan_args.attach(plan);
  plan->add_option("--goal", plan_goals, "Sub-goal, solved in order from the previous end state (repeatable)");
  plan->callback([&] {
    const Domain d = parse_domain(slurp(plan_args.domain));
    const Problem p = parse_problem(slurp(plan_args.problem), d);
    const PlanningTask task = ground(d, p);
    const Formula phi = conjoin(read_constraints(plan_args.ltl_files, plan_args.ltl_inline));
    if (plan_goals.empty()) {
      const SearchResult r = astar_ltl(task, phi, g.search());
      SafetyVerdict v;
      v.tag = r.plan ? Outcome::PlanFound : Outcome::Unsolvable;
      v.plan = r.plan;
      v.constrained = r.stats;
      if (g.json) {
        print_json(to_json(task, v));
      } else if (r.plan) {
        std::cout << "plan (" << r.plan->length() << " steps):\n";
        print_plan(r.plan->names(task));
        print_stats_line(r.stats);
      } else {
        std::cout << "no plan\n";
        print_stats_line(r.stats);
      }
      code = r.plan ? kExitOk : kExitUnsolvable;
      return;
    }
    std::vector<Condition> goals;
    for (const auto& text : plan_goals) goals.push_back(parse_goal(text, d, p.objects));
    const SequenceResult s = plan_sequence(task, task.init, goals, phi, g.search());
    const Outcome tag = s.failed_goal ? *s.failure : Outcome::PlanFound;
    if (g.json) {
      Json j;
      j["result"] = std::string(to_string(tag));
      Json plans = Json::array();
      for (const auto& pl : s.plans) plans.push_back(pl.names(task));
      j["plans"] = plans;
      j["failed_goal"] = s.failed_goal ? Json(*s.failed_goal) : Json(nullptr);
      for (const auto& [k, v] : to_json(s.stats).items()) j[k] = v;
      print_json(j);
    } else {
      for (std::size_t k = 0; k < s.plans.size(); ++k) {
        std::cout << "goal " << (k + 1) << " (" << s.plans[k].length() << " steps):\n";
        print_plan(s.plans[k].names(task));
      }
      if (s.failed_goal) std::cout << "goal " << *s.failed_goal << ": " << to_string(tag) << "\n";
      print_stats_line(s.stats);
    }
    code = exit_code(tag);
  });

  // classify
  TaskArgs classify_args;
  auto* cls = app.add_subcommand("classify", "Classify a task as plan_found, unsafe_refused or unsolvable");
  classify_args.attach(cls);
  cls->callback([&] {
    const PlanningTask task = classify_args.task();
    const SafetyVerdict v = classify(task, read_constraints(classify_args.ltl_files, classify_args.ltl_inline), g.search());
    if (g.json) {
      print_json(to_json(task, v));
    } else {
      std::cout << to_string(v.tag) << "\n";
      if (v.plan) print_plan(v.plan->names(task));
      std::cout << "constrained:   ";
      print_stats_line(v.constrained);
      if (v.unconstrained) {
        std::cout << "unconstrained: ";
        print_stats_line(*v.unconstrained);
      }
    }
    code = exit_code(v.tag);
  });

  // validate
  TaskArgs validate_args;
  std::string plan_file;
  std::vector<std::string> steps;
  auto* val = app.add_subcommand("validate", "Replay a plan against the task and constraints");
  validate_args.attach(val);
  val->add_option("--plan", plan_file, "Plan file, one action per line")->check(CLI::ExistingFile);
  val->add_option("--step", steps, "Plan step such as 'pick(cup1)' (repeatable)");
  val->callback([&] {
    const PlanningTask task = validate_args.task();
    std::vector<std::string> plan_steps;
    if (!plan_file.empty()) plan_steps = formula_lines(slurp(plan_file));
    plan_steps.insert(plan_steps.end(), steps.begin(), steps.end());
    const PlanCheck c =
        validate_plan(task, conjoin(read_constraints(validate_args.ltl_files, validate_args.ltl_inline)), plan_steps);
    if (g.json) {
      print_json(to_json(c));
    } else {
      std::cout << (c.valid ? "valid" : "invalid: " + c.diagnostic) << "\n";
    }
    code = c.valid ? kExitOk : kExitError;
  });

  // progress
  std::string progress_formula;
  auto* prog = app.add_subcommand("progress", "Progress a formula through states read from stdin, one per line");
  prog->add_option("formula", progress_formula, "LTL formula")->required();
  prog->callback([&] {
    Formula f = parse_ltl(progress_formula);
    if (!g.json) std::cout << f.to_string() << "\n";
    Json steps_json = Json::array();
    std::string line;
    while (std::getline(std::cin, line)) {
      const AtomSet s = parse_state(line);
      f = progress(f, s);
      if (g.json) {
        steps_json.push_back(Json{{"state", s.to_string()}, {"residual", f.to_string()}});
      } else {
        std::cout << s.to_string() << " -> " << f.to_string() << "\n";
      }
    }
    if (g.json) print_json(Json{{"formula", parse_ltl(progress_formula).to_string()}, {"steps", steps_json}});
  });

  // equiv / similarity
  std::string lhs, rhs;
  auto* equiv = app.add_subcommand("equiv", "Decide prefix equivalence of two formulas");
  equiv->add_option("a", lhs)->required();
  equiv->add_option("b", rhs)->required();
  equiv->callback([&] {
    const bool eq = prefix_equivalent(parse_ltl(lhs), parse_ltl(rhs));
    if (g.json) {
      print_json(Json{{"equivalent", eq}});
    } else {
      std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
    }
  });
  auto* sim = app.add_subcommand("similarity", "Jaccard similarity of bad-prefix sets");
  sim->add_option("a", lhs)->required();
  sim->add_option("b", rhs)->required();
  sim->callback([&] {
    const double s = semantic_similarity(parse_ltl(lhs), parse_ltl(rhs), g.similarity_depth);
    if (g.json) {
      print_json(Json{{"similarity", s}, {"depth", g.similarity_depth}});
    } else {
      std::cout << s << "\n";
    }
  });

  // vote
  std::string vote_input;
  auto* vote = app.add_subcommand("vote", "Dual-layer equivalence voting over candidate groups");
  vote->add_option("input", vote_input,
                   "JSON file {\"groups\": [[...], ...]} or a directory of .cands files")
      ->required()
      ->check(CLI::ExistingPath);
  vote->callback([&] {
    std::vector<CandidateGroup> groups;
    if (fs::is_directory(vote_input)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(vote_input)) {
        if (e.path().extension() == ".cands") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) groups.push_back({f.stem().string(), formula_lines(slurp(f))});
    } else {
      const Json doc = Json::parse(slurp(vote_input));
      std::size_t i = 0;
      for (const auto& grp : doc.at("groups")) groups.push_back({"group-" + std::to_string(++i), grp.get<std::vector<std::string>>()});
    }
    const VoteResult r = dual_layer_vote(groups);
    if (g.json) {
      print_json(to_json(r));
      return;
    }
    for (const auto& gv : r.groups)
      std::cout << gv.group << ": " << gv.representative.to_string() << " (" << gv.classes.front().size() << " votes)\n";
    std::cout << "winner: " << r.winner.to_string() << " (" << r.tally.front().size() << " of " << r.groups.size()
              << " groups)\n";
    for (const auto& d : r.discarded) std::cout << "discarded [" << to_string(d.reason) << "] " << d.text << "\n";
  });

  // kb
  std::string store_path = "constraints.ltl";
  auto* kb = app.add_subcommand("kb", "Constraint store");
  kb->require_subcommand(1);
  kb->add_option("--store", store_path, "Store file")->capture_default_str();
  auto load_store = [&] { return fs::exists(store_path) ? ConstraintStore::deserialize(slurp(store_path)) : ConstraintStore{}; };

  std::vector<std::string> add_formulas;
  std::string add_source = "cli";
  bool add_force = false;
  auto* kb_add = kb->add_subcommand("add", "Add formulas to the store");
  kb_add->add_option("formulas", add_formulas, "LTL formulas")->required();
  kb_add->add_option("--source", add_source, "Source tag");
  kb_add->add_flag("--force", add_force, "Skip duplicate and conflict checks");
  kb_add->callback([&] {
    ConstraintStore store = load_store();
    Json outcomes = Json::array();
    for (const auto& text : add_formulas) {
      const Formula f = parse_ltl(text);
      std::string outcome;
      if (add_force) {
        store.force(f, add_source);
        outcome = "forced";
      } else {
        outcome = std::string(to_string(store.add(f, add_source)));
      }
      outcomes.push_back(Json{{"formula", f.to_string()}, {"outcome", outcome}});
      if (!g.json) std::cout << outcome << ": " << f.to_string() << "\n";
    }
    std::ofstream(store_path, std::ios::binary) << store.serialize();
    if (g.json) print_json(Json{{"added", outcomes}, {"total", store.total()}, {"unique", store.unique()}});
  });
  auto* kb_list = kb->add_subcommand("list", "List active representatives");
  kb_list->callback([&] {
    const ConstraintStore store = load_store();
    if (g.json) {
      print_json(to_json(store));
      return;
    }
    for (const auto& f : store.representatives()) std::cout << f.to_string() << "\n";
  });
  auto* kb_stats = kb->add_subcommand("stats", "Store counters");
  kb_stats->callback([&] {
    const ConstraintStore store = load_store();
    Json j{{"total", store.total()},
           {"unique", store.unique()},
           {"conflicts_detected", store.conflicts_detected()},
           {"conflicts_resolved", store.conflicts_resolved()}};
    if (g.json) {
      print_json(j);
    } else {
      std::cout << "total " << store.total() << ", unique " << store.unique() << ", conflicts "
                << store.conflicts_detected() << " (resolved " << store.conflicts_resolved() << ")\n";
    }
  });
  auto* kb_export = kb->add_subcommand("export", "Print the active conjunction");
  kb_export->callback([&] {
    const Formula f = load_store().active();
    if (g.json) {
      print_json(Json{{"active", f.to_string()}});
    } else {
      std::cout << f.to_string() << "\n";
    }
  });

  // run
  std::string manifest;
  auto* run = app.add_subcommand("run", "Run a scenario manifest and report");
  run->add_option("manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  run->callback([&] {
    const ScenarioReport report = run_scenarios(manifest, g.search());
    if (g.json) {
      Json j = report.to_json();
      j["flags"] = Json{{"optimal", g.optimal}, {"max_expansions", g.max_expansions}, {"seed", g.seed}};
      print_json(j);
    } else {
      std::cout << report.table();
      for (const auto& r : report.rows) {
        if (r.status != "ok") std::cout << r.id << ": " << r.error << "\n";
        for (const auto& m : r.mismatches) std::cout << r.id << ": " << m << "\n";
      }
    }
    code = report.ok() ? kExitOk : kExitError;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
