#pragma once

#include <span>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/risk/roi.hpp"
#include "bimsense/scan.hpp"

namespace bimsense {

class BimPrior;

struct SweepPlan {
  std::vector<Point2> waypoints;  // serpentine order
  double altitude = 2.5;
  double lane_spacing = 0.0;      // actual spacing between adjacent lanes
  CellRect coverage;              // cells the sweep is meant to cover
  int lanes = 0;
  bool lanes_along_x = true;
  double length = 0.0;            // meters
  double duration = 0.0;          // seconds at the given speed
};

/// Boustrophedon sweep over the ROI grown by `sensor_range` on every side
/// (clipped to the grid). Lanes run along the longer side through cell
/// centers; their count is ceil(span / spacing) + 1 over the cell-center
/// span of the shorter side (one lane when that span is zero), spread
/// evenly so both boundary lanes are flown.
SweepPlan plan_sweep(const RegionOfInterest& roi, const GridMeta& meta, double sensor_range,
                     double lane_spacing, double altitude, double speed);

struct RescanParams {
  SensorSpec sensor{};    // UAV LiDAR
  double stride = 0.25;   // meters between scans along the sweep
};

/// Builds the candidate map: a fresh grid seeded from the soft prior, fused
/// with one scan every `stride` meters along the sweep (ground-truth
/// poses). Poses inside occupied truth cells are skipped. Beam traversals
/// are counted into `touches` when given.
OccupancyGrid execute_rescan(const GridMeta& meta, std::span<const std::uint8_t> truth,
                             const SweepPlan& sweep, const BimPrior& prior,
                             const FusionParams& fusion, const RescanParams& params,
                             double sim_time = 0.0, TouchCounter* touches = nullptr);

/// Poses the rescan would scan from, in order.
std::vector<Point2> sweep_samples(const SweepPlan& sweep, double stride);

enum class HandoffMode { kFullReplace, kRoiPaste };

/// full_replace returns the rescan map verbatim; roi_paste copies the
/// rescan log-odds inside `roi` onto the current map. Throws ConfigError
/// when the geometries differ.
OccupancyGrid map_handoff(const OccupancyGrid& current, const OccupancyGrid& rescan,
                          HandoffMode mode, CellRect roi = {});

}  // namespace bimsense
