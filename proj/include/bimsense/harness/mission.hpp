#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/grid/layers.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/harness/config.hpp"
#include "bimsense/risk/corridor.hpp"
#include "bimsense/risk/roi.hpp"
#include "bimsense/world/world.hpp"

namespace bimsense {

struct TickRecord {
  int tick = 0;
  double time = 0.0;
  double distance = 0.0;  // traveled so far
  double arc = 0.0;       // position along the current path
  Pose2D pose;
  double risk = 0.0;
  double mean_entropy = 0.0;
  double mean_discrepancy = 0.0;
  double min_clearance = 0.0;
  bool empty_window = false;
  bool trigger = false;
  TriggerReason reason = TriggerReason::kNone;
};

struct Intervention {
  std::string kind;  // "uav_rescan" or "frontier_exploration"
  int tick = 0;
  double time = 0.0;
  double distance = 0.0;
  Pose2D pose;
  TriggerReason reason = TriggerReason::kNone;
  CellRect roi;
  double roi_mean_risk = 0.0;
  double risk_before = 0.0;
  double risk_after = 0.0;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  double discrepancy_before = 0.0;
  double duration = 0.0;  // seconds added to the mission clock
  int sweep_lanes = 0;
  int frontier_steps = 0;
  bool replanned = false;
};

struct MissionRecord {
  std::string scenario;
  Policy policy = Policy::kUavAssisted;
  std::uint64_t seed = 0;
  std::vector<TickRecord> trace;
  std::vector<Intervention> interventions;
  std::optional<double> delta_risk_pct;
  std::optional<double> delta_entropy_pct;
  double min_clearance = 0.0;  // along the executed poses, against the truth
  std::optional<double> min_clearance_after_intervention;
  double path_length = 0.0;
  double mission_time = 0.0;
  int ticks = 0;
  bool goal_reached = false;
  std::string outcome;  // goal, halted, planning_failure, tick_budget, ...
  std::optional<double> first_trigger_distance;
  std::optional<double> first_trigger_risk;
  std::optional<TriggerReason> first_trigger_reason;
  std::vector<Point2> executed;                  // pose after every tick
  std::vector<std::vector<Point2>> planned_paths;  // in planning order

  /// Designed outcomes: the goal, or a halt under the static policy.
  bool completed() const;
};

/// Everything a snapshot renderer or test needs at a tick boundary.
struct MissionSnapshot {
  int tick = 0;
  double time = 0.0;
  const OccupancyGrid* grid = nullptr;
  const BimPrior* prior = nullptr;
  const LayerStack* layers = nullptr;
  const std::vector<Point2>* path = nullptr;
  const Corridor* corridor = nullptr;
  const ForwardWindow* window = nullptr;
  std::optional<CellRect> roi;
  Pose2D pose;
};

/// Called after every assessed tick; return false to stop the mission.
using TickObserver = std::function<bool(const MissionSnapshot&)>;

/// Loaded site: BIM prior and ground-truth world for a scenario.
struct Site {
  BimPrior prior;
  GroundTruthWorld world;
};
Site load_site(const ScenarioConfig& config);

/// Runs the perception / assessment / response loop until the goal, a halt,
/// a planning failure or the tick budget. Deterministic for a fixed config
/// and seed.
MissionRecord run_mission(const ScenarioConfig& config, const Site& site, std::uint64_t seed,
                          const TickObserver& observer = {});
MissionRecord run_mission(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace bimsense
