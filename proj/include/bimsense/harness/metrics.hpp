#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bimsense/harness/record_io.hpp"

namespace bimsense {

/// Means over the runs of one scenario. Percent changes are averaged over
/// the runs that had an intervention only; the counts say how many.
struct ScenarioMetrics {
  std::string scenario;
  std::string policy;
  std::size_t runs = 0;
  std::optional<double> delta_risk_pct;
  std::size_t delta_risk_count = 0;
  std::optional<double> delta_entropy_pct;
  std::size_t delta_entropy_count = 0;
  double min_clearance = 0.0;
  double path_length = 0.0;
  double mission_time = 0.0;
  double goal_rate = 0.0;
  double interventions = 0.0;
};

/// Throws ConfigError for an empty list or runs from different scenarios.
ScenarioMetrics compute_metrics(const std::vector<RunSummary>& runs);

/// Groups runs by scenario name (sorted by name) and aggregates each group.
std::vector<ScenarioMetrics> compute_all_metrics(const std::vector<RunSummary>& runs);

std::string metrics_csv(const std::vector<ScenarioMetrics>& rows);
nlohmann::ordered_json metrics_json(const std::vector<ScenarioMetrics>& rows);

}  // namespace bimsense
