#include "bimsense/risk/corridor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bimsense/errors.hpp"
#include "bimsense/grid/traversal.hpp"

namespace bimsense {

Point2 Corridor::point_at(double s) const {
  if (path.empty()) return {};
  if (s <= 0.0) return path.front();
  if (s >= length()) return path.back();
  const auto it = std::upper_bound(arc.begin(), arc.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - arc.begin()) - 1;
  const double seg = arc[k + 1] - arc[k];
  const double t = seg > 0.0 ? (s - arc[k]) / seg : 0.0;
  return path[k] + t * (path[k + 1] - path[k]);
}

Corridor::Projection Corridor::project(Point2 p) const {
  Projection best{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const SegmentProjection sp = project_onto_segment(p, path[k], path[k + 1]);
    if (sp.distance < best.distance - 1e-12) {
      best.distance = sp.distance;
      best.arc = arc[k] + sp.t * (arc[k + 1] - arc[k]);
    }
  }
  return best;
}

Corridor build_corridor(std::span<const Point2> path, double half_width, const GridMeta& meta) {
  if (path.size() < 2) throw ConfigError("corridor: path needs at least two vertices");
  if (!(half_width >= 0.0)) throw ConfigError("corridor: negative half width");
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (!meta.in_bounds(path[k])) throw ConfigError("corridor: path vertex outside the grid");
    if (k > 0 && path[k] == path[k - 1])
      throw ConfigError("corridor: repeated consecutive path vertex");
  }

  Corridor c;
  c.meta = meta;
  c.path.assign(path.begin(), path.end());
  c.half_width = half_width;
  c.arc.resize(path.size(), 0.0);
  for (std::size_t k = 1; k < path.size(); ++k)
    c.arc[k] = c.arc[k - 1] + distance(path[k - 1], path[k]);

  // Dense scratch over the path's bounding box grown by the half width.
  Point2 lo = path[0], hi = path[0];
  for (const Point2& p : path) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const CellRect box = meta.rect_covering(lo - Point2{half_width, half_width},
                                          hi + Point2{half_width, half_width});
  const std::size_t n = box.area();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best_dist(n, kInf);
  std::vector<double> best_arc(n, 0.0);
  std::vector<std::uint8_t> traversed(n, 0);
  auto local = [&](CellIndex q) {
    return static_cast<std::size_t>(q.iy - box.y0) * box.width() + (q.ix - box.x0);
  };

  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point2 a = path[k], b = path[k + 1];
    const double seg_len = c.arc[k + 1] - c.arc[k];
    const CellRect r =
        meta.rect_covering({std::min(a.x, b.x) - half_width, std::min(a.y, b.y) - half_width},
                           {std::max(a.x, b.x) + half_width, std::max(a.y, b.y) + half_width});
    for (int y = r.y0; y < r.y1; ++y)
      for (int x = r.x0; x < r.x1; ++x) {
        const SegmentProjection sp = project_onto_segment(meta.world_of({x, y}), a, b);
        const std::size_t i = local({x, y});
        if (sp.distance < best_dist[i] - 1e-12) {
          best_dist[i] = sp.distance;
          best_arc[i] = c.arc[k] + sp.t * seg_len;
        }
      }
    traverse_ray(meta, a, std::atan2(b.y - a.y, b.x - a.x), seg_len,
                 [&](CellIndex q, double, double) {
                   if (box.contains(q)) traversed[local(q)] = 1;
                   return true;
                 });
  }

  for (int y = box.y0; y < box.y1; ++y)
    for (int x = box.x0; x < box.x1; ++x) {
      const std::size_t i = local({x, y});
      if (best_dist[i] <= half_width || traversed[i]) {
        c.cells.push_back({x, y});
        c.cell_arc.push_back(best_arc[i]);
      }
    }
  return c;
}

ForwardWindow forward_window(const Corridor& corridor, double start_arc, double length) {
  ForwardWindow w;
  w.start = std::clamp(start_arc, 0.0, corridor.length());
  w.end = std::min(w.start + std::max(length, 0.0), corridor.length());
  for (std::size_t i = 0; i < corridor.cells.size(); ++i) {
    const double s = corridor.cell_arc[i];
    if (s >= w.start && s <= w.end) w.members.push_back(i);
  }
  return w;
}

ForwardWindow forward_window(const Corridor& corridor, Pose2D pose, double length) {
  const Corridor::Projection p = corridor.project(pose.position());
  ForwardWindow w = forward_window(corridor, p.arc, length);
  w.off_corridor = p.distance > corridor.half_width + 2.0 * corridor.meta.resolution;
  return w;
}

void drop_masked(const Corridor& corridor, ForwardWindow& window,
                 std::span<const std::uint8_t> mask) {
  if (mask.size() != corridor.meta.cell_count())
    throw ConfigError("window mask does not match the grid");
  std::erase_if(window.members, [&](std::size_t m) {
    return mask[corridor.meta.index(corridor.cells[m])] != 0;
  });
}

CellRect window_bounds(const Corridor& corridor, const ForwardWindow& window) {
  if (window.members.empty()) return {};
  CellRect r{corridor.meta.width, corridor.meta.height, 0, 0};
  for (std::size_t m : window.members) {
    const CellIndex c = corridor.cells[m];
    r.x0 = std::min(r.x0, c.ix);
    r.y0 = std::min(r.y0, c.iy);
    r.x1 = std::max(r.x1, c.ix + 1);
    r.y1 = std::max(r.y1, c.iy + 1);
  }
  return r;
}

}  // namespace bimsense
