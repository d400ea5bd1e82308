#include "bimsense/world/world.hpp"

#include <algorithm>
#include <cmath>

#include "bimsense/errors.hpp"
#include "bimsense/grid/traversal.hpp"

namespace bimsense {

GroundTruthWorld::GroundTruthWorld(GridMeta meta, std::vector<std::uint8_t> base,
                                   std::vector<WorldEdit> edits)
    : meta_(meta), base_(std::move(base)), edits_(std::move(edits)) {
  if (!meta_.valid()) throw ConfigError("world: invalid grid geometry");
  if (base_.size() != meta_.cell_count())
    throw ConfigError("world: base raster size does not match grid geometry");
  for (const WorldEdit& e : edits_) {
    if (e.rect.empty() || e.rect.intersect(meta_.bounds()) != e.rect)
      throw ConfigError("world: edit '" + e.label + "' is empty or outside the grid");
  }
  for (auto& v : base_) v = v ? 1 : 0;
}

std::vector<std::uint8_t> GroundTruthWorld::apply_edits(double t) const {
  std::vector<std::uint8_t> truth = base_;
  for (const WorldEdit& e : edits_) {
    if (e.activation_time > t) continue;
    const std::uint8_t v = e.kind == EditKind::kAdd ? 1 : 0;
    for (int y = e.rect.y0; y < e.rect.y1; ++y)
      for (int x = e.rect.x0; x < e.rect.x1; ++x) truth[meta_.index({x, y})] = v;
  }
  return truth;
}

std::span<const std::uint8_t> GroundTruthWorld::truth_at(double t) {
  // Bitmask of active edits identifies the raster (edit logs are short).
  std::size_t active = 0;
  for (std::size_t k = 0; k < edits_.size() && k < 63; ++k)
    if (edits_[k].activation_time <= t) active |= std::size_t{1} << k;
  if (edits_.size() >= 63 || active != cached_active_ || cache_.empty()) {
    cache_ = apply_edits(t);
    cached_active_ = active;
  }
  return cache_;
}

Scan raycast_scan(const GridMeta& meta, std::span<const std::uint8_t> truth, Pose2D pose,
                  const SensorSpec& spec, double sim_time, std::mt19937_64* rng) {
  if (!spec.valid()) throw ConfigError("raycast: invalid sensor spec");
  if (truth.size() != meta.cell_count()) throw ConfigError("raycast: truth raster size");
  const Point2 origin = pose.position();
  if (!meta.in_bounds(origin)) throw DomainError("raycast: sensor pose outside the grid");
  if (spec.range_noise_sigma > 0.0 && rng == nullptr)
    throw ConfigError("raycast: range noise requested without a random source");

  Scan scan;
  scan.pose = pose;
  scan.angle_min = spec.angle_min;
  scan.angle_max = spec.angle_max;
  scan.angle_increment = spec.angle_increment;
  scan.range_max = spec.range_max;
  scan.timestamp = sim_time;
  const std::size_t beams = spec.beam_count();

  if (truth[meta.index(meta.cell_of(origin))]) {
    scan.ranges.assign(beams, 0.0);
    return scan;
  }

  scan.ranges.resize(beams, Scan::kNoReturn);
  std::normal_distribution<double> noise(0.0, spec.range_noise_sigma);
  for (std::size_t k = 0; k < beams; ++k) {
    double range = Scan::kNoReturn;
    traverse_ray(meta, origin, scan.beam_angle(k), spec.range_max,
                 [&](CellIndex c, double t_enter, double) {
                   if (truth[meta.index(c)]) {
                     range = t_enter;
                     return false;
                   }
                   return true;
                 });
    if (range > spec.range_max) range = Scan::kNoReturn;
    if (Scan::is_hit(range) && spec.range_noise_sigma > 0.0)
      range = std::clamp(range + noise(*rng), 0.0, spec.range_max);
    scan.ranges[k] = range;
  }
  return scan;
}

Pose2D step_ugv(Pose2D pose, Point2 waypoint, double speed, double dt) {
  const Point2 delta = waypoint - pose.position();
  const double remaining = norm(delta);
  if (remaining == 0.0) return pose;
  const double advance = speed * dt;
  Pose2D next = pose;
  next.yaw = std::atan2(delta.y, delta.x);
  if (advance >= remaining) {
    next.x = waypoint.x;
    next.y = waypoint.y;
  } else {
    next.x += delta.x / remaining * advance;
    next.y += delta.y / remaining * advance;
  }
  return next;
}

}  // namespace bimsense
