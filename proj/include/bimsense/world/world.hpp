#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bimsense/grid_meta.hpp"
#include "bimsense/scan.hpp"

namespace bimsense {

enum class EditKind : std::uint8_t { kAdd, kRemove };

/// A site change: a rectangle of cells that becomes occupied (kAdd) or free
/// (kRemove) from `activation_time` on.
struct WorldEdit {
  EditKind kind = EditKind::kAdd;
  CellRect rect{};
  double activation_time = 0.0;
  std::string label;
};

/// Synthetic as-built site: a base occupancy raster plus an ordered log of
/// edits. The truth at time t is the base with every edit whose activation
/// time is <= t applied in log order.
class GroundTruthWorld {
 public:
  /// Throws ConfigError when the raster size is wrong or an edit rectangle
  /// is empty or leaves the grid.
  GroundTruthWorld(GridMeta meta, std::vector<std::uint8_t> base,
                   std::vector<WorldEdit> edits = {});

  const GridMeta& meta() const { return meta_; }
  std::span<const std::uint8_t> base() const { return base_; }
  const std::vector<WorldEdit>& edits() const { return edits_; }

  /// Truth raster at time t (fresh copy).
  std::vector<std::uint8_t> apply_edits(double t) const;

  /// Truth raster at time t, cached until the set of active edits changes.
  std::span<const std::uint8_t> truth_at(double t);

 private:
  GridMeta meta_;
  std::vector<std::uint8_t> base_;
  std::vector<WorldEdit> edits_;
  std::size_t cached_active_ = static_cast<std::size_t>(-1);
  std::vector<std::uint8_t> cache_;
};

/// Traces every beam of `spec` from `pose` through the truth raster. The
/// range of a beam is the distance to the boundary of the first occupied
/// cell it enters; beams that stay clear within range_max report
/// Scan::kNoReturn. A sensor inside an occupied cell reports all zeros.
/// With range_noise_sigma > 0, `rng` must be supplied.
Scan raycast_scan(const GridMeta& meta, std::span<const std::uint8_t> truth, Pose2D pose,
                  const SensorSpec& spec, double sim_time, std::mt19937_64* rng = nullptr);

inline Scan raycast_scan(GroundTruthWorld& world, Pose2D pose, const SensorSpec& spec,
                         double sim_time, std::mt19937_64* rng = nullptr) {
  return raycast_scan(world.meta(), world.truth_at(sim_time), pose, spec, sim_time, rng);
}

/// Idealized kinematics: move straight toward `waypoint` by
/// min(speed * dt, remaining distance), heading along the motion.
Pose2D step_ugv(Pose2D pose, Point2 waypoint, double speed, double dt);

}  // namespace bimsense
