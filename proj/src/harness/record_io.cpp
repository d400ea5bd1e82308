#include "bimsense/harness/record_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "bimsense/errors.hpp"

namespace bimsense {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }
ojson opt(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }
ojson point(Point2 p) { return ojson::array({p.x, p.y}); }
ojson rect(const CellRect& r) { return ojson::array({r.x0, r.y0, r.x1, r.y1}); }

ojson polyline(const std::vector<Point2>& pts) {
  ojson a = ojson::array();
  for (const Point2& p : pts) a.push_back(point(p));
  return a;
}

std::string csv_num(double v) { return std::isfinite(v) ? fmt::format("{}", v) : ""; }

}  // namespace

nlohmann::ordered_json to_json(const MissionRecord& r, const std::string& config_path) {
  ojson j;
  j["scenario"] = r.scenario;
  j["policy"] = std::string(to_string(r.policy));
  j["seed"] = r.seed;
  j["config"] = config_path;
  j["outcome"] = r.outcome;
  j["goal_reached"] = r.goal_reached;
  j["ticks"] = r.ticks;
  j["mission_time"] = num(r.mission_time);
  j["path_length"] = num(r.path_length);
  j["min_clearance"] = num(r.min_clearance);
  j["min_clearance_after_intervention"] = opt(r.min_clearance_after_intervention);
  j["delta_risk_pct"] = opt(r.delta_risk_pct);
  j["delta_entropy_pct"] = opt(r.delta_entropy_pct);
  if (r.first_trigger_distance) {
    j["first_trigger"] = {{"distance", num(*r.first_trigger_distance)},
                          {"risk", opt(r.first_trigger_risk)},
                          {"reason", std::string(to_string(*r.first_trigger_reason))}};
  } else {
    j["first_trigger"] = nullptr;
  }
  ojson ivs = ojson::array();
  for (const Intervention& iv : r.interventions) {
    ivs.push_back({{"kind", iv.kind},
                   {"tick", iv.tick},
                   {"time", num(iv.time)},
                   {"distance", num(iv.distance)},
                   {"pose", ojson::array({iv.pose.x, iv.pose.y, iv.pose.yaw})},
                   {"reason", std::string(to_string(iv.reason))},
                   {"roi", rect(iv.roi)},
                   {"roi_mean_risk", num(iv.roi_mean_risk)},
                   {"risk_before", num(iv.risk_before)},
                   {"risk_after", num(iv.risk_after)},
                   {"entropy_before", num(iv.entropy_before)},
                   {"entropy_after", num(iv.entropy_after)},
                   {"discrepancy_before", num(iv.discrepancy_before)},
                   {"duration", num(iv.duration)},
                   {"sweep_lanes", iv.sweep_lanes},
                   {"frontier_steps", iv.frontier_steps},
                   {"replanned", iv.replanned}});
  }
  j["interventions"] = std::move(ivs);
  ojson trace = ojson::array();
  for (const TickRecord& t : r.trace) {
    trace.push_back({{"tick", t.tick},
                     {"time", num(t.time)},
                     {"distance", num(t.distance)},
                     {"arc", num(t.arc)},
                     {"pose", ojson::array({t.pose.x, t.pose.y, t.pose.yaw})},
                     {"risk", num(t.risk)},
                     {"mean_entropy", num(t.mean_entropy)},
                     {"mean_discrepancy", num(t.mean_discrepancy)},
                     {"min_clearance", num(t.min_clearance)},
                     {"empty_window", t.empty_window},
                     {"trigger", t.trigger},
                     {"reason", std::string(to_string(t.reason))}});
  }
  j["trace"] = std::move(trace);
  ojson plans = ojson::array();
  for (const auto& p : r.planned_paths) plans.push_back(polyline(p));
  j["planned_paths"] = std::move(plans);
  j["executed"] = polyline(r.executed);
  return j;
}

std::string dump_record(const MissionRecord& record, const std::string& config_path) {
  return to_json(record, config_path).dump(1) + "\n";
}

std::string trace_csv(const MissionRecord& r) {
  std::string out =
      "tick,time,distance,arc,x,y,yaw,risk,mean_entropy,mean_discrepancy,min_clearance,"
      "trigger,reason\n";
  for (const TickRecord& t : r.trace) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t.tick, csv_num(t.time),
                       csv_num(t.distance), csv_num(t.arc), csv_num(t.pose.x), csv_num(t.pose.y),
                       csv_num(t.pose.yaw), csv_num(t.risk), csv_num(t.mean_entropy),
                       csv_num(t.mean_discrepancy), csv_num(t.min_clearance),
                       t.trigger ? 1 : 0, to_string(t.reason));
  }
  return out;
}

RunSummary summarize(const MissionRecord& r) {
  RunSummary s;
  s.scenario = r.scenario;
  s.policy = std::string(to_string(r.policy));
  s.seed = r.seed;
  s.goal_reached = r.goal_reached;
  s.outcome = r.outcome;
  s.delta_risk_pct = r.delta_risk_pct;
  s.delta_entropy_pct = r.delta_entropy_pct;
  s.min_clearance = r.min_clearance;
  s.path_length = r.path_length;
  s.mission_time = r.mission_time;
  s.interventions = static_cast<int>(r.interventions.size());
  return s;
}

RunSummary summary_from_json(const nlohmann::json& j) {
  auto optional_number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  try {
    RunSummary s;
    s.scenario = j.at("scenario").get<std::string>();
    s.policy = j.at("policy").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.config_path = j.value("config", std::string());
    s.goal_reached = j.at("goal_reached").get<bool>();
    s.outcome = j.at("outcome").get<std::string>();
    s.delta_risk_pct = optional_number("delta_risk_pct");
    s.delta_entropy_pct = optional_number("delta_entropy_pct");
    s.min_clearance = optional_number("min_clearance").value_or(INFINITY);
    s.path_length = j.at("path_length").get<double>();
    s.mission_time = j.at("mission_time").get<double>();
    s.interventions = static_cast<int>(j.at("interventions").size());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("record: ") + e.what(), 0);
  }
}

RunSummary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("record: ") + e.what(), e.byte);
  }
  return summary_from_json(j);
}

}  // namespace bimsense
