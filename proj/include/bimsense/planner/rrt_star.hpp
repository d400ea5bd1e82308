#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/planner/planning_map.hpp"

namespace bimsense {

struct PlanRequest {
  Point2 start;
  Point2 goal;
  int max_iterations = 20000;
  double step = 1.0;           // meters
  double goal_bias = 0.1;      // probability of sampling the goal
  double rewire_radius = 3.0;  // meters
  double resample_spacing = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlannedPath {
  std::vector<Point2> raw;   // tree vertices, start to goal
  std::vector<Point2> path;  // smoothed and resampled
  double length = 0.0;       // of `path`
  double cost = 0.0;         // tree cost of `raw`
};

struct PlanResult {
  std::optional<PlannedPath> path;
  std::string failure;  // set when path is empty

  bool ok() const { return path.has_value(); }
};

/// Seeded RRT* on the planning map's traversable cells. The tree keeps
/// every goal connection it finds and returns the cheapest one after all
/// iterations, so for a fixed seed more iterations never give a higher
/// cost. Start or goal outside traversable space fails immediately.
PlanResult plan_rrt_star(const PlanningMap& map, const PlanRequest& request);

/// Greedy shortcutting (from each kept vertex, jump to the farthest vertex
/// with a free chord), then per-segment resampling with spacing close to
/// `spacing`. Every chord of the result is free and no gap exceeds
/// 1.5 * spacing. Gaps below 0.5 * spacing survive only next to a vertex
/// that cannot be dropped without a blocked or overlong chord. The result
/// starts and ends at the input endpoints.
std::vector<Point2> smooth_and_resample(const std::vector<Point2>& raw, const PlanningMap& map,
                                        double spacing);

/// Uniform arc-length resampling only: the segment count is the rounded
/// length / spacing (at least one).
std::vector<Point2> resample(const std::vector<Point2>& polyline, double spacing);

double polyline_length(const std::vector<Point2>& polyline);

}  // namespace bimsense
