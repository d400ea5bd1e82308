#include "bimsense/harness/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "bimsense/errors.hpp"

namespace bimsense {

ScenarioMetrics compute_metrics(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw ConfigError("metrics: no runs");
  ScenarioMetrics m;
  m.scenario = runs.front().scenario;
  m.policy = runs.front().policy;
  m.runs = runs.size();
  double dr = 0.0, dh = 0.0, clr = 0.0, len = 0.0, time = 0.0, goals = 0.0, ivs = 0.0;
  for (const RunSummary& r : runs) {
    if (r.scenario != m.scenario) throw ConfigError("metrics: runs from different scenarios");
    if (r.delta_risk_pct) {
      dr += *r.delta_risk_pct;
      ++m.delta_risk_count;
    }
    if (r.delta_entropy_pct) {
      dh += *r.delta_entropy_pct;
      ++m.delta_entropy_count;
    }
    clr += r.min_clearance;
    len += r.path_length;
    time += r.mission_time;
    goals += r.goal_reached ? 1.0 : 0.0;
    ivs += r.interventions;
  }
  const double n = static_cast<double>(runs.size());
  if (m.delta_risk_count > 0) m.delta_risk_pct = dr / m.delta_risk_count;
  if (m.delta_entropy_count > 0) m.delta_entropy_pct = dh / m.delta_entropy_count;
  m.min_clearance = clr / n;
  m.path_length = len / n;
  m.mission_time = time / n;
  m.goal_rate = goals / n;
  m.interventions = ivs / n;
  return m;
}

std::vector<ScenarioMetrics> compute_all_metrics(const std::vector<RunSummary>& runs) {
  std::map<std::string, std::vector<RunSummary>> groups;
  for (const RunSummary& r : runs) groups[r.scenario].push_back(r);
  std::vector<ScenarioMetrics> out;
  for (const auto& [name, group] : groups) out.push_back(compute_metrics(group));
  return out;
}

namespace {

std::string cell(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? fmt::format("{:.3f}", *v) : "";
}

}  // namespace

std::string metrics_csv(const std::vector<ScenarioMetrics>& rows) {
  std::string out =
      "scenario,policy,runs,delta_risk_pct,delta_risk_count,delta_entropy_pct,"
      "delta_entropy_count,min_clearance,path_length,mission_time,goal_rate,interventions\n";
  for (const ScenarioMetrics& m : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", m.scenario, m.policy, m.runs,
                       cell(m.delta_risk_pct), m.delta_risk_count, cell(m.delta_entropy_pct),
                       m.delta_entropy_count, cell(m.min_clearance), cell(m.path_length),
                       cell(m.mission_time), cell(m.goal_rate), cell(m.interventions));
  }
  return out;
}

nlohmann::ordered_json metrics_json(const std::vector<ScenarioMetrics>& rows) {
  using ojson = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  auto num = [](double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); };
  ojson out = ojson::array();
  for (const ScenarioMetrics& m : rows) {
    out.push_back({{"scenario", m.scenario},
                   {"policy", m.policy},
                   {"runs", m.runs},
                   {"delta_risk_pct", opt(m.delta_risk_pct)},
                   {"delta_risk_count", m.delta_risk_count},
                   {"delta_entropy_pct", opt(m.delta_entropy_pct)},
                   {"delta_entropy_count", m.delta_entropy_count},
                   {"min_clearance", num(m.min_clearance)},
                   {"path_length", num(m.path_length)},
                   {"mission_time", num(m.mission_time)},
                   {"goal_rate", num(m.goal_rate)},
                   {"interventions", num(m.interventions)}});
  }
  return out;
}

}  // namespace bimsense
