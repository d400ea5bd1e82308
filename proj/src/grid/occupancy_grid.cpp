#include "bimsense/grid/occupancy_grid.hpp"

#include "bimsense/errors.hpp"
#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/grid/traversal.hpp"

namespace bimsense {

void FusionParams::validate() const {
  if (!(p_occ > 0.5 && p_occ < 1.0))
    throw ConfigError("fusion: p_occ must lie in (0.5, 1)");
  if (!(p_free > 0.0 && p_free < 0.5))
    throw ConfigError("fusion: p_free must lie in (0, 0.5)");
  if (!(l_min < 0.0 && l_max > 0.0))
    throw ConfigError("fusion: clip range must straddle zero");
}

OccupancyGrid::OccupancyGrid(GridMeta meta, FusionParams params, double initial_logodds)
    : meta_(meta), params_(params) {
  if (!meta_.valid()) throw ConfigError("occupancy grid: invalid geometry");
  params_.validate();
  logodds_.assign(meta_.cell_count(), clip(initial_logodds));
}

OccupancyGrid OccupancyGrid::from_prior(const BimPrior& prior, const FusionParams& params) {
  OccupancyGrid grid(prior.meta(), params);
  for (std::size_t i = 0; i < grid.logodds_.size(); ++i)
    grid.logodds_[i] = grid.clip(prior.prior_logodds(i));
  return grid;
}

std::size_t fuse_scan(OccupancyGrid& grid, const BimPrior& prior, const Scan& scan,
                      TouchCounter* touches) {
  const GridMeta& meta = grid.meta();
  if (!(meta == prior.meta()))
    throw ConfigError("fuse_scan: grid and prior geometry differ");
  if (!meta.in_bounds(scan.pose.position()))
    throw DomainError("fuse_scan: sensor pose outside the grid");
  if (touches && touches->size() != meta.cell_count())
    touches->assign(meta.cell_count(), 0);

  const double hit = grid.params().hit_increment();
  const double miss = grid.params().miss_increment();
  // Returns sit on the boundary of the first occupied cell; a small bias
  // places them inside it.
  constexpr double kBoundaryBias = 1e-9;

  std::size_t applied = 0;
  const Point2 origin = scan.pose.position();
  for (std::size_t k = 0; k < scan.ranges.size(); ++k) {
    const double r = scan.ranges[k];
    const bool returned = Scan::is_hit(r);
    const double end = returned ? r + kBoundaryBias : scan.range_max;
    traverse_ray(meta, origin, scan.beam_angle(k), end,
                 [&](CellIndex c, double /*t_enter*/, double t_exit) {
                   const bool is_end = returned && t_exit > end;
                   const std::size_t i = meta.index(c);
                   if (touches) ++(*touches)[i];
                   if (!prior.frozen(i)) {
                     grid.add_evidence(i, is_end ? hit : miss);
                     ++applied;
                   }
                   return !is_end;
                 });
  }
  return applied;
}

}  // namespace bimsense
