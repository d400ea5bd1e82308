#include "bimsense/planner/planning_map.hpp"

#include <cmath>

#include "bimsense/errors.hpp"
#include "bimsense/grid/edt.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/grid/traversal.hpp"

namespace bimsense {

PlanningMap::PlanningMap(const OccupancyGrid& grid, double inflation,
                         double occupied_threshold, double free_threshold)
    : meta_(grid.meta()), inflation_(inflation) {
  if (inflation < 0.0) throw ConfigError("planning map: negative inflation");
  if (!(free_threshold <= occupied_threshold))
    throw ConfigError("planning map: free threshold above occupied threshold");
  const std::size_t n = meta_.cell_count();
  std::vector<std::uint8_t> occupied(n);
  std::vector<std::uint8_t> free(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = logodds_to_probability(grid.logodds(i));
    occupied[i] = p > occupied_threshold;
    free[i] = p < free_threshold;
  }
  distance_ = squared_distance_transform(occupied, meta_.width, meta_.height);
  traversable_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    distance_[i] = std::sqrt(distance_[i]) * meta_.resolution;
    traversable_[i] = free[i] && distance_[i] >= inflation_;
  }
}

bool PlanningMap::segment_free(Point2 a, Point2 b) const {
  if (!traversable(a) || !traversable(b)) return false;
  const double len = bimsense::distance(a, b);
  if (len == 0.0) return true;
  const double angle = std::atan2(b.y - a.y, b.x - a.x);
  bool ok = true;
  traverse_ray(meta_, a, angle, len, [&](CellIndex c, double, double) {
    if (!traversable(c)) ok = false;
    return ok;
  });
  return ok;
}

}  // namespace bimsense
