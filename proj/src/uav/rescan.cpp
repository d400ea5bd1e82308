#include "bimsense/uav/rescan.hpp"

#include <algorithm>
#include <cmath>

#include "bimsense/errors.hpp"
#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/world/world.hpp"

namespace bimsense {

namespace {

std::vector<double> lane_positions(double lo, double hi, double spacing) {
  const double span = hi - lo;
  if (span <= 1e-9) return {lo};
  const int n = static_cast<int>(std::ceil(span / spacing - 1e-9)) + 1;
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = lo + span * k / (n - 1);
  return out;
}

}  // namespace

SweepPlan plan_sweep(const RegionOfInterest& roi, const GridMeta& meta, double sensor_range,
                     double lane_spacing, double altitude, double speed) {
  if (roi.rect.empty()) throw ConfigError("sweep: empty region of interest");
  if (!(lane_spacing > 0.0)) throw ConfigError("sweep: lane spacing must be positive");
  if (!(speed > 0.0)) throw ConfigError("sweep: speed must be positive");
  if (sensor_range < 0.0) throw ConfigError("sweep: negative sensor range");

  const int grow = static_cast<int>(std::floor(sensor_range / meta.resolution + 1e-9));
  SweepPlan plan;
  plan.altitude = altitude;
  plan.coverage = roi.rect.grow(grow).intersect(meta.bounds());
  const CellRect& c = plan.coverage;
  const Point2 lo = meta.world_of({c.x0, c.y0});
  const Point2 hi = meta.world_of({c.x1 - 1, c.y1 - 1});
  plan.lanes_along_x = c.width() >= c.height();

  const double across_lo = plan.lanes_along_x ? lo.y : lo.x;
  const double across_hi = plan.lanes_along_x ? hi.y : hi.x;
  const double along_lo = plan.lanes_along_x ? lo.x : lo.y;
  const double along_hi = plan.lanes_along_x ? hi.x : hi.y;
  const std::vector<double> lanes = lane_positions(across_lo, across_hi, lane_spacing);
  plan.lanes = static_cast<int>(lanes.size());
  plan.lane_spacing = lanes.size() > 1 ? lanes[1] - lanes[0] : 0.0;
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    double a = along_lo, b = along_hi;
    if (k % 2 == 1) std::swap(a, b);
    for (const double s : {a, b})
      plan.waypoints.push_back(plan.lanes_along_x ? Point2{s, lanes[k]} : Point2{lanes[k], s});
  }
  for (std::size_t i = 1; i < plan.waypoints.size(); ++i)
    plan.length += distance(plan.waypoints[i - 1], plan.waypoints[i]);
  plan.duration = plan.length / speed;
  return plan;
}

std::vector<Point2> sweep_samples(const SweepPlan& sweep, double stride) {
  if (!(stride > 0.0)) throw ConfigError("rescan: stride must be positive");
  std::vector<Point2> out;
  if (sweep.waypoints.empty()) return out;
  out.push_back(sweep.waypoints.front());
  double carry = 0.0;  // arc length since the last sample
  for (std::size_t i = 1; i < sweep.waypoints.size(); ++i) {
    const Point2 a = sweep.waypoints[i - 1];
    const Point2 b = sweep.waypoints[i];
    const double len = distance(a, b);
    double s = stride - carry;
    for (; s <= len + 1e-12; s += stride) out.push_back(a + (len > 0.0 ? s / len : 0.0) * (b - a));
    carry = len - (s - stride);
  }
  if (!(out.back() == sweep.waypoints.back())) out.push_back(sweep.waypoints.back());
  return out;
}

OccupancyGrid execute_rescan(const GridMeta& meta, std::span<const std::uint8_t> truth,
                             const SweepPlan& sweep, const BimPrior& prior,
                             const FusionParams& fusion, const RescanParams& params,
                             double sim_time, TouchCounter* touches) {
  if (!(prior.meta() == meta)) throw ConfigError("rescan: prior geometry differs from world");
  OccupancyGrid grid = OccupancyGrid::from_prior(prior, fusion);
  if (touches) touches->assign(meta.cell_count(), 0);
  const std::vector<Point2> samples = sweep_samples(sweep, params.stride);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Point2 p = samples[k];
    if (!meta.in_bounds(p)) continue;
    if (truth[meta.index(meta.cell_of(p))] != 0) continue;
    const Point2 next = k + 1 < samples.size() ? samples[k + 1] : p;
    const double yaw = next == p ? 0.0 : std::atan2(next.y - p.y, next.x - p.x);
    const Scan scan = raycast_scan(meta, truth, {p.x, p.y, yaw}, params.sensor, sim_time);
    fuse_scan(grid, prior, scan, touches);
  }
  return grid;
}

OccupancyGrid map_handoff(const OccupancyGrid& current, const OccupancyGrid& rescan,
                          HandoffMode mode, CellRect roi) {
  if (!(current.meta() == rescan.meta())) throw ConfigError("handoff: map geometries differ");
  if (mode == HandoffMode::kFullReplace) return rescan;
  OccupancyGrid out = current;
  const GridMeta& meta = current.meta();
  const CellRect r = roi.intersect(meta.bounds());
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) {
      const std::size_t i = meta.index({x, y});
      out.set_logodds(i, rescan.logodds(i));
    }
  return out;
}

}  // namespace bimsense
