#pragma once

#include <cmath>
#include <limits>

#include "bimsense/geometry.hpp"
#include "bimsense/grid_meta.hpp"

namespace bimsense {

/// Walks the cells pierced by the ray origin + t * (cos a, sin a) for
/// t in [0, length], in order (Amanatides-Woo DDA). The visitor receives the
/// cell and the ray parameters (meters) where the ray enters and leaves it,
/// and returns false to stop. Traversal also stops when the ray leaves the
/// grid.
template <class Visit>
void traverse_ray(const GridMeta& meta, Point2 origin, double angle, double length,
                  Visit&& visit) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double res = meta.resolution;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  CellIndex c = meta.cell_of(origin);
  if (!meta.in_bounds(c)) return;

  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  const double lx = origin.x - meta.origin.x;
  const double ly = origin.y - meta.origin.y;

  double t_max_x = kInf;
  double t_max_y = kInf;
  if (step_x > 0) t_max_x = ((c.ix + 1) * res - lx) / dx;
  if (step_x < 0) t_max_x = (c.ix * res - lx) / dx;
  if (step_y > 0) t_max_y = ((c.iy + 1) * res - ly) / dy;
  if (step_y < 0) t_max_y = (c.iy * res - ly) / dy;
  const double t_delta_x = step_x != 0 ? res / std::fabs(dx) : kInf;
  const double t_delta_y = step_y != 0 ? res / std::fabs(dy) : kInf;

  double t_enter = 0.0;
  while (t_enter <= length) {
    const double t_exit = std::min(t_max_x, t_max_y);
    if (!visit(c, t_enter, t_exit)) return;
    t_enter = t_exit;
    if (t_max_x < t_max_y) {
      c.ix += step_x;
      t_max_x += t_delta_x;
    } else {
      c.iy += step_y;
      t_max_y += t_delta_y;
    }
    if (!meta.in_bounds(c)) return;
  }
}

}  // namespace bimsense
