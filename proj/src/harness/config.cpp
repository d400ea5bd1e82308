#include "bimsense/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "bimsense/errors.hpp"

namespace bimsense {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::kStaticBim:
      return "static_bim";
    case Policy::kUavAssisted:
      return "uav_assisted";
    case Policy::kFrontierOnly:
      return "frontier_only";
  }
  return "static_bim";
}

Policy parse_policy(std::string_view s) {
  if (s == "static_bim") return Policy::kStaticBim;
  if (s == "uav_assisted") return Policy::kUavAssisted;
  if (s == "frontier_only") return Policy::kFrontierOnly;
  throw ConfigError("unknown policy '" + std::string(s) + "'");
}

CellRect to_cells(const GridMeta& meta, const WorldRect& r) {
  const auto lo = [&](double v, double o) {
    return static_cast<int>(std::ceil((v - o) / meta.resolution - 0.5 - 1e-9));
  };
  const auto hi = [&](double v, double o) {
    return static_cast<int>(std::floor((v - o) / meta.resolution - 0.5 + 1e-9)) + 1;
  };
  return {lo(r.x0, meta.origin.x), lo(r.y0, meta.origin.y), hi(r.x1, meta.origin.x),
          hi(r.y1, meta.origin.y)};
}

namespace {

class Section {
 public:
  Section(const YAML::Node& node, std::string name, std::initializer_list<const char*> keys)
      : node_(node), name_(std::move(name)) {
    if (!node_) return;
    if (!node_.IsMap()) throw ConfigError("config: '" + name_ + "' must be a mapping");
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        throw ConfigError("config: unknown key '" + k + "' in '" + name_ + "'");
    }
  }

  template <class T>
  void get(const char* key, T& out) const {
    if (!node_ || !node_[key]) return;
    try {
      out = node_[key].template as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config: bad value for '" + name_ + "." + key + "'");
    }
  }

  YAML::Node operator[](const char* key) const { return node_ ? node_[key] : YAML::Node(); }

 private:
  YAML::Node node_;
  std::string name_;
};

Point2 point(const YAML::Node& n, const char* what) {
  if (!n || !n.IsSequence() || n.size() != 2)
    throw ConfigError(std::string("config: '") + what + "' must be [x, y]");
  return {n[0].as<double>(), n[1].as<double>()};
}

WorldRect rect(const YAML::Node& n, const char* what) {
  if (!n || !n.IsSequence() || n.size() != 4)
    throw ConfigError(std::string("config: '") + what + "' must be [x0, y0, x1, y1]");
  WorldRect r{n[0].as<double>(), n[1].as<double>(), n[2].as<double>(), n[3].as<double>()};
  if (!(r.x1 > r.x0 && r.y1 > r.y0)) throw ConfigError(std::string("config: empty ") + what);
  return r;
}

SensorSpec sensor(const Section& s, SensorSpec base) {
  int beams = static_cast<int>(base.beam_count());
  double fov_deg = 360.0;
  double range = base.range_max;
  double noise = base.range_noise_sigma;
  s.get("beams", beams);
  s.get("fov_deg", fov_deg);
  s.get("range", range);
  s.get("noise", noise);
  if (beams < 1) throw ConfigError("config: sensor needs at least one beam");
  if (!(fov_deg > 0.0 && fov_deg <= 360.0)) throw ConfigError("config: fov_deg outside (0, 360]");
  const double fov = fov_deg * std::numbers::pi / 180.0;
  SensorSpec out;
  out.angle_increment = fov_deg == 360.0 ? fov / beams : (beams > 1 ? fov / (beams - 1) : fov);
  out.angle_min = -0.5 * fov;
  out.angle_max = out.angle_min + (beams - 1) * out.angle_increment;
  out.range_max = range;
  out.range_noise_sigma = noise;
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  fusion.validate();
  risk.validate();
  planner.validate();
  if (runs < 1) throw ConfigError("config: runs must be >= 1");
  if (bim_confidence < 0.6 || bim_confidence > 0.9)
    throw ConfigError("config: bim confidence outside [0.6, 0.9]");
  if (!(corridor_half_width > 0.0)) throw ConfigError("config: corridor half-width must be positive");
  if (!(lookahead > 0.0)) throw ConfigError("config: lookahead must be positive");
  if (!(roi_width > 0.0 && roi_height > 0.0)) throw ConfigError("config: ROI must be non-empty");
  if (!(ugv_speed > 0.0 && uav_speed > 0.0)) throw ConfigError("config: speeds must be positive");
  if (!(dt > 0.0)) throw ConfigError("config: dt must be positive");
  if (warmup_scans < 0) throw ConfigError("config: warmup_scans must be >= 0");
  if (!ugv_sensor.valid() || !uav_sensor.valid()) throw ConfigError("config: invalid sensor");
  if (!(lane_spacing > 0.0 && uav_stride > 0.0)) throw ConfigError("config: invalid sweep spacing");
  if (!(frontier_radius > 0.0)) throw ConfigError("config: frontier radius must be positive");
  if (tick_budget < 1) throw ConfigError("config: tick budget must be positive");
  if (max_interventions < 0) throw ConfigError("config: max_interventions must be >= 0");
  if (!(free_threshold <= occupied_threshold)) throw ConfigError("config: thresholds inverted");
  if (!std::filesystem::exists(map_path))
    throw ConfigError("config: map file not found: " + map_path.string());
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open " + path.string());
  } catch (const YAML::Exception& e) {
    throw ParseError("config: " + e.msg, e.mark.pos);
  }
  const Section top(root, "config",
                    {"name", "policy", "map", "seed", "runs", "start", "goal", "bim", "edits",
                     "fusion", "risk", "ugv", "uav", "planner", "frontier", "mission"});
  ScenarioConfig c;
  top.get("name", c.name);
  std::string policy = "uav_assisted";
  top.get("policy", policy);
  c.policy = parse_policy(policy);
  std::string map;
  top.get("map", map);
  if (map.empty()) throw ConfigError("config: 'map' is required");
  c.map_path = map;
  if (c.map_path.is_relative()) c.map_path = path.parent_path() / c.map_path;
  top.get("seed", c.seed);
  top.get("runs", c.runs);
  c.start = point(root["start"], "start");
  c.goal = point(root["goal"], "goal");

  const Section bim(root["bim"], "bim", {"confidence", "frozen_margin", "openings"});
  bim.get("confidence", c.bim_confidence);
  bim.get("frozen_margin", c.frozen_margin);
  if (const YAML::Node o = bim["openings"]) {
    for (const auto& n : o) c.openings.push_back(rect(n, "opening"));
  }

  if (const YAML::Node edits = root["edits"]) {
    for (const auto& n : edits) {
      const Section e(n, "edits[]", {"kind", "rect", "time", "label"});
      EditSpec spec;
      std::string kind = "add";
      e.get("kind", kind);
      if (kind == "add") {
        spec.kind = EditKind::kAdd;
      } else if (kind == "remove") {
        spec.kind = EditKind::kRemove;
      } else {
        throw ConfigError("config: edit kind must be add or remove");
      }
      spec.rect = rect(n["rect"], "edit rect");
      e.get("time", spec.time);
      e.get("label", spec.label);
      c.edits.push_back(std::move(spec));
    }
  }

  const Section fusion(root["fusion"], "fusion", {"p_occ", "p_free", "l_min", "l_max"});
  fusion.get("p_occ", c.fusion.p_occ);
  fusion.get("p_free", c.fusion.p_free);
  fusion.get("l_min", c.fusion.l_min);
  fusion.get("l_max", c.fusion.l_max);

  const Section risk(root["risk"], "risk",
                     {"alpha", "beta", "tau_safe", "m_min", "r_ugv", "corridor_half_width",
                      "lookahead", "exclude_frozen", "roi_width", "roi_height",
                      "occupied_threshold", "free_threshold"});
  risk.get("alpha", c.risk.alpha);
  risk.get("beta", c.risk.beta);
  risk.get("tau_safe", c.risk.tau_safe);
  risk.get("m_min", c.risk.m_min);
  risk.get("r_ugv", c.risk.r_ugv);
  risk.get("corridor_half_width", c.corridor_half_width);
  risk.get("lookahead", c.lookahead);
  risk.get("exclude_frozen", c.exclude_frozen);
  risk.get("roi_width", c.roi_width);
  risk.get("roi_height", c.roi_height);
  risk.get("occupied_threshold", c.occupied_threshold);
  risk.get("free_threshold", c.free_threshold);

  const Section ugv(root["ugv"], "ugv",
                    {"speed", "dt", "beams", "fov_deg", "range", "noise", "warmup_scans"});
  ugv.get("speed", c.ugv_speed);
  ugv.get("dt", c.dt);
  ugv.get("warmup_scans", c.warmup_scans);
  c.ugv_sensor = sensor(ugv, c.ugv_sensor);

  SensorSpec uav_default;
  uav_default.range_max = 5.0;
  const Section uav(root["uav"], "uav",
                    {"speed", "altitude", "beams", "fov_deg", "range", "noise", "lane_spacing",
                     "stride", "handoff"});
  uav.get("speed", c.uav_speed);
  uav.get("altitude", c.uav_altitude);
  uav.get("lane_spacing", c.lane_spacing);
  uav.get("stride", c.uav_stride);
  c.uav_sensor = sensor(uav, uav_default);
  std::string handoff = "full_replace";
  uav.get("handoff", handoff);
  if (handoff == "full_replace") {
    c.handoff = HandoffMode::kFullReplace;
  } else if (handoff == "roi_paste") {
    c.handoff = HandoffMode::kRoiPaste;
  } else {
    throw ConfigError("config: handoff must be full_replace or roi_paste");
  }

  const Section planner(root["planner"], "planner",
                        {"step", "goal_bias", "rewire_radius", "max_iterations",
                         "resample_spacing", "inflation_slack"});
  planner.get("step", c.planner.step);
  planner.get("goal_bias", c.planner.goal_bias);
  planner.get("rewire_radius", c.planner.rewire_radius);
  planner.get("max_iterations", c.planner.max_iterations);
  planner.get("resample_spacing", c.planner.resample_spacing);
  planner.get("inflation_slack", c.inflation_slack);

  const Section frontier(root["frontier"], "frontier",
                         {"radius", "unknown_entropy", "min_cluster_size", "exclusion_radius",
                          "max_steps"});
  frontier.get("radius", c.frontier_radius);
  frontier.get("unknown_entropy", c.frontier.unknown_entropy);
  frontier.get("min_cluster_size", c.frontier.min_cluster_size);
  frontier.get("exclusion_radius", c.frontier.exclusion_radius);
  frontier.get("max_steps", c.frontier_max_steps);

  const Section mission(root["mission"], "mission",
                        {"tick_budget", "max_interventions", "layer_margin", "trigger_mark"});
  mission.get("tick_budget", c.tick_budget);
  mission.get("max_interventions", c.max_interventions);
  mission.get("layer_margin", c.layer_margin);
  mission.get("trigger_mark", c.trigger_mark);

  c.frontier.free_threshold = c.free_threshold;
  c.validate();
  return c;
}

}  // namespace bimsense
