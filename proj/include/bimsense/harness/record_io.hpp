#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bimsense/harness/mission.hpp"

namespace bimsense {

/// Full record as ordered JSON. Non-finite numbers become null. Key order
/// and number formatting are fixed, so equal records give equal bytes.
nlohmann::ordered_json to_json(const MissionRecord& record, const std::string& config_path = {});
std::string dump_record(const MissionRecord& record, const std::string& config_path = {});

/// Per-tick trace as CSV (one header line).
std::string trace_csv(const MissionRecord& record);

/// Table-level numbers of one run.
struct RunSummary {
  std::string scenario;
  std::string policy;
  std::uint64_t seed = 0;
  std::string config_path;
  bool goal_reached = false;
  std::string outcome;
  std::optional<double> delta_risk_pct;
  std::optional<double> delta_entropy_pct;
  double min_clearance = 0.0;
  double path_length = 0.0;
  double mission_time = 0.0;
  int interventions = 0;
};

RunSummary summarize(const MissionRecord& record);
/// Reads the summary fields of a record written by dump_record. Throws
/// ParseError on malformed documents.
RunSummary summary_from_json(const nlohmann::json& doc);
RunSummary read_summary(const std::filesystem::path& record_path);

}  // namespace bimsense
