#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/planner/frontier.hpp"
#include "bimsense/planner/rrt_star.hpp"
#include "bimsense/risk/assess.hpp"
#include "bimsense/scan.hpp"
#include "bimsense/uav/rescan.hpp"
#include "bimsense/world/world.hpp"

namespace bimsense {

enum class Policy { kStaticBim, kUavAssisted, kFrontierOnly };
std::string_view to_string(Policy p);
Policy parse_policy(std::string_view s);

/// Axis-aligned rectangle in world meters, [x0, x1] x [y0, y1].
struct WorldRect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// Cells whose centers fall inside the rectangle.
CellRect to_cells(const GridMeta& meta, const WorldRect& r);

struct EditSpec {
  EditKind kind = EditKind::kAdd;
  WorldRect rect;
  double time = 0.0;
  std::string label;
};

struct ScenarioConfig {
  std::string name;
  Policy policy = Policy::kUavAssisted;
  std::filesystem::path map_path;  // YAML sidecar; relative to the config file
  std::uint64_t seed = 1;
  int runs = 1;
  Point2 start;
  Point2 goal;

  double bim_confidence = 0.67;
  double frozen_margin = 0.2;
  std::vector<WorldRect> openings;
  std::vector<EditSpec> edits;

  FusionParams fusion{};
  RiskParams risk{};
  double occupied_threshold = 0.65;
  double free_threshold = 0.35;
  double corridor_half_width = 1.0;
  double lookahead = 5.0;
  bool exclude_frozen = false;  // leave frozen BIM cells out of the window average
  double roi_width = 5.0;   // meters
  double roi_height = 5.0;  // meters

  double ugv_speed = 1.0;
  double dt = 0.1;
  SensorSpec ugv_sensor{};
  int warmup_scans = 10;

  double uav_speed = 2.0;
  double uav_altitude = 2.5;
  SensorSpec uav_sensor{};
  double lane_spacing = 2.0;
  double uav_stride = 0.25;
  HandoffMode handoff = HandoffMode::kFullReplace;

  PlanRequest planner{};  // start, goal and seed are filled per call
  double inflation_slack = 0.0;  // added to r_ugv + m_min for planning

  double frontier_radius = 5.0;
  FrontierParams frontier{};
  int frontier_max_steps = 60;

  int tick_budget = 10000;
  int max_interventions = 3;
  double layer_margin = 3.0;    // meters around the window for layer updates
  double trigger_mark = 70.0;   // expected distance to the first trigger

  double inflation() const { return risk.r_ugv + risk.m_min + inflation_slack; }

  /// Throws ConfigError on out-of-range values or a missing map file.
  void validate() const;
};

/// Parses a scenario document (YAML). Unknown keys are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace bimsense
