#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid_meta.hpp"

namespace bimsense {

class OccupancyGrid;

/// Binarized, inflated snapshot of the fused map. A cell is traversable
/// when it is confidently free (probability below free_threshold) and its
/// distance to the nearest occupied cell (probability above
/// occupied_threshold) is at least the inflation radius. Cells in between
/// the two thresholds block motion but do not count as obstacles for the
/// distance field.
class PlanningMap {
 public:
  PlanningMap(const OccupancyGrid& grid, double inflation, double occupied_threshold = 0.65,
              double free_threshold = 0.35);

  const GridMeta& meta() const { return meta_; }
  double inflation() const { return inflation_; }

  bool traversable(CellIndex c) const {
    return meta_.in_bounds(c) && traversable_[meta_.index(c)] != 0;
  }
  bool traversable(Point2 p) const { return traversable(meta_.cell_of(p)); }

  /// Distance (meters) from the cell center to the nearest occupied cell
  /// center; +inf without obstacles.
  double distance(CellIndex c) const { return distance_[meta_.index(c)]; }

  /// True when every cell the segment passes through is traversable.
  bool segment_free(Point2 a, Point2 b) const;

  std::span<const std::uint8_t> traversable_mask() const { return traversable_; }

 private:
  GridMeta meta_;
  double inflation_;
  std::vector<std::uint8_t> traversable_;
  std::vector<double> distance_;
};

}  // namespace bimsense
