#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid_meta.hpp"

namespace bimsense {

class OccupancyGrid;
class BimPrior;

/// Derived per-cell rasters over a rectangle of the map: occupancy
/// probability, entropy (bits), discrepancy against the as-designed raster,
/// and Euclidean distance (meters) to the nearest cell with probability
/// above the occupancy threshold.
///
/// When the rectangle is a sub-region of the map, distances only see the
/// occupied cells inside it: they are exact wherever the true distance is
/// below the distance from the cell to the rectangle border, and never
/// smaller than the true distance.
struct LayerStack {
  static constexpr double kNoObstacle = std::numeric_limits<double>::infinity();

  GridMeta meta;    // geometry of the full map
  CellRect region;  // cells the rasters cover
  double occupied_threshold = 0.65;
  std::vector<double> probability;
  std::vector<double> entropy;
  std::vector<double> discrepancy;
  std::vector<double> distance;

  bool covers(CellIndex c) const { return region.contains(c); }
  std::size_t local_index(CellIndex c) const {
    return static_cast<std::size_t>(c.iy - region.y0) * region.width() + (c.ix - region.x0);
  }
  double probability_at(CellIndex c) const { return probability[local_index(c)]; }
  double entropy_at(CellIndex c) const { return entropy[local_index(c)]; }
  double discrepancy_at(CellIndex c) const { return discrepancy[local_index(c)]; }
  double distance_at(CellIndex c) const { return distance[local_index(c)]; }
};

/// Full-map layers.
LayerStack compute_layers(const OccupancyGrid& grid, const BimPrior& prior,
                          double occupied_threshold);

/// Layers restricted to `region` (clipped to the map).
LayerStack compute_layers(const OccupancyGrid& grid, const BimPrior& prior,
                          double occupied_threshold, CellRect region);

/// Distance-to-obstacle at a world point by bilinear interpolation between
/// the four surrounding cell centers, minus the robot radius. Throws
/// DomainError when the point is outside the layers' region.
double clearance_at(const LayerStack& layers, Point2 p, double robot_radius);

/// Entropy and discrepancy of the cell containing p.
double entropy_at(const LayerStack& layers, Point2 p);
double discrepancy_at(const LayerStack& layers, Point2 p);

}  // namespace bimsense
