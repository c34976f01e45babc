#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <bbound/report.hpp>

namespace bbound {

struct RunOverrides {
  int resolution_override = 0;      // 0 = none
  std::string sweep_only;           // "", "delta", "c", "resolution"
  std::string out_dir = "out";
  bool force_plots = false;
};

struct ScenarioResult {
  std::string name;
  int exit_code = 0;  // 0 pass, 2 audit failure, 3 construction error
  ordered_json report;
  std::string summary_csv;
  std::vector<std::pair<std::string, std::string>> artifacts;  // path, payload
};

// Parses and validates a scenario config; throws ConfigError with a
// field-level message on malformed input.
nlohmann::json parse_scenario(const std::string& text);

// Runs a parsed scenario end to end and collects the report bundle.
ScenarioResult run_scenario(const nlohmann::json& config,
                            const RunOverrides& overrides = {});

// Writes result artifacts (report JSON, summary CSV, field/barrier CSVs,
// optional SVGs) under <out_dir>/<scenario-name>/.
void write_artifacts(const ScenarioResult& result, const std::string& out_dir);

// Merge report bundles into one combined CSV; unreadable inputs are skipped
// with a warning on the returned report. Duplicate scenario names receive
// numeric suffixes.
struct MergeResult {
  std::string csv;
  int skipped = 0;
  int merged = 0;
};
MergeResult merge_reports(const std::vector<std::string>& paths);

}  // namespace bbound
