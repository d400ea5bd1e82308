#include "bimsense/planner/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>

#include "bimsense/errors.hpp"
#include "bimsense/grid/bim_prior.hpp"

namespace bimsense {

namespace {

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

CellRect search_rect(const GridMeta& meta, Point2 c, double radius) {
  return meta.rect_covering({c.x - radius, c.y - radius}, {c.x + radius, c.y + radius});
}

}  // namespace

std::vector<FrontierCluster> find_frontiers(const LayerStack& layers, const BimPrior* prior,
                                            Point2 center, double radius,
                                            const FrontierParams& params) {
  if (!(radius > 0.0)) throw ConfigError("frontier: radius must be positive");
  const GridMeta& meta = layers.meta;
  const CellRect rect = search_rect(meta, center, radius).intersect(layers.region);
  if (rect.empty()) return {};

  auto unknown = [&](CellIndex n) {
    if (!layers.covers(n)) return false;
    if (prior && prior->frozen(n)) return false;
    return layers.entropy_at(n) > params.unknown_entropy;
  };
  const int w = rect.width();
  std::vector<std::uint8_t> is_frontier(rect.area(), 0);
  auto local = [&](CellIndex c) {
    return static_cast<std::size_t>(c.iy - rect.y0) * w + (c.ix - rect.x0);
  };
  for (int y = rect.y0; y < rect.y1; ++y)
    for (int x = rect.x0; x < rect.x1; ++x) {
      const CellIndex c{x, y};
      if (distance(meta.world_of(c), center) > radius) continue;
      if (!(layers.probability_at(c) < params.free_threshold)) continue;
      for (int k = 0; k < 8; ++k)
        if (unknown({x + kDx[k], y + kDy[k]})) {
          is_frontier[local(c)] = 1;
          break;
        }
    }

  std::vector<FrontierCluster> clusters;
  std::vector<CellIndex> stack;
  for (int y = rect.y0; y < rect.y1; ++y)
    for (int x = rect.x0; x < rect.x1; ++x) {
      if (is_frontier[local({x, y})] != 1) continue;
      FrontierCluster cl;
      stack.assign(1, {x, y});
      is_frontier[local({x, y})] = 2;
      while (!stack.empty()) {
        const CellIndex c = stack.back();
        stack.pop_back();
        cl.cells.push_back(c);
        for (int k = 0; k < 8; ++k) {
          const CellIndex n{c.ix + kDx[k], c.iy + kDy[k]};
          if (!rect.contains(n) || is_frontier[local(n)] != 1) continue;
          is_frontier[local(n)] = 2;
          stack.push_back(n);
        }
      }
      if (cl.cells.size() < params.min_cluster_size) continue;
      std::sort(cl.cells.begin(), cl.cells.end(), [](CellIndex a, CellIndex b) {
        return a.iy != b.iy ? a.iy < b.iy : a.ix < b.ix;
      });
      Point2 sum{};
      for (const CellIndex& c : cl.cells) sum = sum + meta.world_of(c);
      cl.centroid = (1.0 / static_cast<double>(cl.cells.size())) * sum;
      clusters.push_back(std::move(cl));
    }
  return clusters;
}

FrontierStep frontier_explore_step(const PlanningMap& map, const LayerStack& layers,
                                   const BimPrior* prior, Pose2D pose, double radius,
                                   const std::vector<Point2>& visited,
                                   const FrontierParams& params) {
  return frontier_explore_step(map, layers, prior, pose, pose.position(), radius, visited,
                               params);
}

FrontierStep frontier_explore_step(const PlanningMap& map, const LayerStack& layers,
                                   const BimPrior* prior, Pose2D pose, Point2 center,
                                   double radius, const std::vector<Point2>& visited,
                                   const FrontierParams& params) {
  if (!(radius > 0.0)) throw ConfigError("frontier: radius must be positive");
  const GridMeta& meta = map.meta();
  const Point2 here = pose.position();
  const CellIndex start = meta.cell_of(here);
  if (!meta.in_bounds(start)) throw DomainError("frontier: pose off the grid");

  FrontierStep step;
  for (const double r : {radius, 1.5 * radius}) {
    step.radius_used = r;
    std::vector<FrontierCluster> clusters = find_frontiers(layers, prior, center, r, params);
    step.clusters_seen = clusters.size();
    if (clusters.empty()) return step;

    // Shortest grid routes over traversable cells (the pose cell is always
    // allowed so a robot hugging a wall can still leave it).
    const CellRect a = search_rect(meta, here, 2.0 * r);
    const CellRect b = search_rect(meta, center, 2.0 * r);
    const CellRect box{std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
                       std::max(a.y1, b.y1)};
    const int w = box.width();
    auto local = [&](CellIndex c) {
      return static_cast<std::size_t>(c.iy - box.y0) * w + (c.ix - box.x0);
    };
    std::vector<double> dist(box.area(), std::numeric_limits<double>::infinity());
    std::vector<int> from(box.area(), -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[local(start)] = 0.0;
    open.push({0.0, local(start)});
    while (!open.empty()) {
      const auto [d, i] = open.top();
      open.pop();
      if (d > dist[i]) continue;
      const CellIndex c{box.x0 + static_cast<int>(i % w), box.y0 + static_cast<int>(i / w)};
      for (int k = 0; k < 8; ++k) {
        const CellIndex n{c.ix + kDx[k], c.iy + kDy[k]};
        if (!box.contains(n) || !map.traversable(n)) continue;
        // No corner cutting past blocked cells.
        if (k >= 4 && (!map.traversable(CellIndex{c.ix + kDx[k], c.iy}) ||
                       !map.traversable(CellIndex{c.ix, c.iy + kDy[k]})))
          continue;
        const double nd = d + (k < 4 ? 1.0 : std::numbers::sqrt2);
        const std::size_t j = local(n);
        if (nd < dist[j]) {
          dist[j] = nd;
          from[j] = static_cast<int>(i);
          open.push({nd, j});
        }
      }
    }

    std::stable_sort(clusters.begin(), clusters.end(),
                     [&](const FrontierCluster& p, const FrontierCluster& q) {
                       return distance(p.centroid, here) < distance(q.centroid, here);
                     });
    for (const FrontierCluster& cl : clusters) {
      const bool excluded = std::any_of(visited.begin(), visited.end(), [&](Point2 v) {
        return distance(v, cl.centroid) <= params.exclusion_radius;
      });
      if (excluded) continue;
      const CellIndex* target = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (const CellIndex& c : cl.cells) {
        if (!box.contains(c) || !std::isfinite(dist[local(c)])) continue;
        const double d = distance(meta.world_of(c), cl.centroid);
        if (d < best) {
          best = d;
          target = &c;
        }
      }
      if (!target) continue;
      step.done = false;
      step.waypoint = meta.world_of(*target);
      step.centroid = cl.centroid;
      for (int i = static_cast<int>(local(*target)); i >= 0; i = from[i]) {
        const CellIndex c{box.x0 + i % w, box.y0 + i / w};
        step.route.push_back(c == start ? here : meta.world_of(c));
      }
      std::reverse(step.route.begin(), step.route.end());
      return step;
    }
  }
  return step;
}

}  // namespace bimsense
