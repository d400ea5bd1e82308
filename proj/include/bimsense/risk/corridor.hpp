#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid_meta.hpp"

namespace bimsense {

/// Band of half-width `half_width` around a planned polyline. Each member
/// cell remembers the arc length of its nearest path point, which is what
/// the forward window slices on.
struct Corridor {
  GridMeta meta;
  std::vector<Point2> path;
  std::vector<double> arc;  // cumulative arc length at each vertex
  double half_width = 0.0;
  std::vector<CellIndex> cells;  // row-major order
  std::vector<double> cell_arc;  // parallel to `cells`

  double length() const { return arc.empty() ? 0.0 : arc.back(); }

  /// Point at arc length s along the path (clamped to [0, length]).
  Point2 point_at(double s) const;

  /// Arc length of the point of the path nearest to p (earliest on ties),
  /// and the distance to it.
  struct Projection {
    double arc;
    double distance;
  };
  Projection project(Point2 p) const;
};

/// Member cells are the cells whose centers lie within half_width of some
/// segment, plus every cell the polyline itself passes through. Throws
/// ConfigError for fewer than two vertices, consecutive duplicate vertices,
/// or vertices off the grid.
Corridor build_corridor(std::span<const Point2> path, double half_width, const GridMeta& meta);

/// Look-ahead slice of the corridor: member cells with nearest arc in
/// [start, start + length], clipped at the path end.
struct ForwardWindow {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::size_t> members;  // indices into Corridor::cells
  bool off_corridor = false;         // pose farther than half_width + 2 cells
};

ForwardWindow forward_window(const Corridor& corridor, double start_arc, double length);

/// Window anchored at the projection of the robot pose onto the path.
ForwardWindow forward_window(const Corridor& corridor, Pose2D pose, double length);

/// Removes window members whose cell is set in `mask` (one byte per grid
/// cell, row-major). Used to keep frozen BIM structure out of the average.
void drop_masked(const Corridor& corridor, ForwardWindow& window,
                 std::span<const std::uint8_t> mask);

/// Bounding rectangle of the window cells (empty when the window is).
CellRect window_bounds(const Corridor& corridor, const ForwardWindow& window);

}  // namespace bimsense
