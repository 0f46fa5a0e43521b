#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "safeplan/automaton.hpp"
#include "safeplan/error.hpp"
#include "safeplan/knowledge.hpp"
#include "safeplan/planner.hpp"
#include "safeplan/report.hpp"
#include "safeplan/safety.hpp"
#include "safeplan/voting.hpp"

namespace py = pybind11;
using namespace safeplan;

namespace {

AtomSet to_state(const std::vector<std::string>& atoms) {
  AtomSet s;
  for (const auto& a : atoms) s.insert(parse_atom(a));
  return s;
}

SearchOptions options(std::size_t max_expansions, bool optimal) {
  SearchOptions o;
  o.max_expansions = max_expansions;
  o.heuristic = optimal ? Heuristic::Zero : Heuristic::GoalCount;
  return o;
}

PlanningTask load_task(const std::string& domain_text, const std::string& problem_text) {
  const Domain d = parse_domain(domain_text);
  return ground(d, parse_problem(problem_text, d));
}

std::vector<Formula> parse_all(const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const auto& t : texts) out.push_back(parse_ltl(t));
  return out;
}

// JSON values cross into Python as their text; the package wrapper decodes.
std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LTL-constrained planning, safety classification and equivalence voting";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<LtlSyntaxError>(m, "LtlSyntaxError", base.ptr());
  py::register_exception<AlphabetTooLarge>(m, "AlphabetTooLarge", base.ptr());
  py::register_exception<PddlSyntaxError>(m, "PddlSyntaxError", base.ptr());
  py::register_exception<UnsupportedRequirement>(m, "UnsupportedRequirement", base.ptr());
  py::register_exception<PddlValidationError>(m, "PddlValidationError", base.ptr());
  py::register_exception<UnknownAction>(m, "UnknownAction", base.ptr());
  py::register_exception<AllCandidatesInvalid>(m, "AllCandidatesInvalid", base.ptr());

  m.def("parse", [](const std::string& text) { return parse_ltl(text).to_string(); },
        "Canonical text of an LTL formula.");
  m.def("progress",
        [](const std::string& formula, const std::vector<std::string>& state) {
          return progress(parse_ltl(formula), to_state(state)).to_string();
        },
        py::arg("formula"), py::arg("state"), "Residual after one observed state (list of atoms).");
  m.def("equivalent",
        [](const std::string& a, const std::string& b) { return prefix_equivalent(parse_ltl(a), parse_ltl(b)); });
  m.def("similarity",
        [](const std::string& a, const std::string& b, int depth) {
          return semantic_similarity(parse_ltl(a), parse_ltl(b), depth);
        },
        py::arg("a"), py::arg("b"), py::arg("depth") = kDefaultSimilarityDepth);
  m.def("is_conflicting",
        [](const std::vector<std::string>& formulas) { return is_conflicting(parse_all(formulas)); });

  m.def("_classify",
        [](const std::string& domain, const std::string& problem, const std::vector<std::string>& constraints,
           std::size_t max_expansions, bool optimal) {
          const PlanningTask task = load_task(domain, problem);
          return dump(to_json(task, classify(task, parse_all(constraints), options(max_expansions, optimal))));
        },
        py::arg("domain"), py::arg("problem"), py::arg("constraints") = std::vector<std::string>{},
        py::arg("max_expansions") = kDefaultMaxExpansions, py::arg("optimal") = false);
  m.def("_validate",
        [](const std::string& domain, const std::string& problem, const std::vector<std::string>& plan,
           const std::vector<std::string>& constraints) {
          const PlanningTask task = load_task(domain, problem);
          return dump(to_json(validate_plan(task, conjoin(parse_all(constraints)), plan)));
        },
        py::arg("domain"), py::arg("problem"), py::arg("plan"),
        py::arg("constraints") = std::vector<std::string>{});
  m.def("_vote", [](const std::vector<std::vector<std::string>>& groups) {
    std::vector<CandidateGroup> gs;
    for (std::size_t i = 0; i < groups.size(); ++i) gs.push_back({"group-" + std::to_string(i + 1), groups[i]});
    return dump(to_json(dual_layer_vote(gs)));
  });
}
