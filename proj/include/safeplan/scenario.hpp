#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "safeplan/planner.hpp"
#include "safeplan/report.hpp"

namespace safeplan {

struct ScenarioRow {
  std::string id;
  /// "ok", "io_error" (a referenced file is missing or unreadable) or
  /// "error" (anything else that stopped the scenario).
  std::string status = "ok";
  std::string error;
  bool constrained = false;
  std::optional<Outcome> tag;
  std::optional<std::vector<std::string>> plan;
  SearchStats stats;
  std::optional<SearchStats> unconstrained;
  /// Unset when the scenario states no expectations.
  std::optional<bool> passed;
  std::vector<std::string> mismatches;
};

struct ScenarioReport {
  /// Sorted by id.
  std::vector<ScenarioRow> rows;

  bool ok() const;
  Json to_json() const;
  /// Aligned table with the columns Exp./Gen./Pruned/|π|.
  std::string table() const;
};

/// Runs every scenario of a manifest:
///   {"scenarios": [{"id", "domain", "problem" | "scene", "goal" | "goals",
///                   "constraints": [paths], "expected": {...}}]}
/// Paths are relative to the manifest. Per-scenario failures are recorded in
/// the row; a manifest that does not parse throws Error.
ScenarioReport run_scenarios(const std::filesystem::path& manifest, const SearchOptions& options = {});

}  // namespace safeplan
