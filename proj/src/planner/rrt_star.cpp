#include "bimsense/planner/rrt_star.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bimsense/errors.hpp"

namespace bimsense {

void PlanRequest::validate() const {
  if (max_iterations < 0) throw ConfigError("plan: negative iteration budget");
  if (!(step > 0.0)) throw ConfigError("plan: step must be positive");
  if (goal_bias < 0.0 || goal_bias > 1.0) throw ConfigError("plan: goal bias outside [0, 1]");
  if (!(rewire_radius > 0.0)) throw ConfigError("plan: rewire radius must be positive");
  if (!(resample_spacing > 0.0)) throw ConfigError("plan: resample spacing must be positive");
}

double polyline_length(const std::vector<Point2>& polyline) {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += distance(polyline[i - 1], polyline[i]);
  return len;
}

std::vector<Point2> resample(const std::vector<Point2>& polyline, double spacing) {
  if (polyline.size() < 2) return polyline;
  const double total = polyline_length(polyline);
  const int segments = std::max(1, static_cast<int>(std::lround(total / spacing)));
  const double ds = total / segments;
  std::vector<Point2> out;
  out.reserve(segments + 1);
  out.push_back(polyline.front());
  std::size_t seg = 1;
  double seg_start = 0.0;
  for (int k = 1; k < segments; ++k) {
    const double s = k * ds;
    while (seg + 1 < polyline.size() &&
           seg_start + distance(polyline[seg - 1], polyline[seg]) < s) {
      seg_start += distance(polyline[seg - 1], polyline[seg]);
      ++seg;
    }
    const Point2 a = polyline[seg - 1];
    const Point2 b = polyline[seg];
    const double len = distance(a, b);
    const double t = len > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 0.0;
    out.push_back(a + t * (b - a));
  }
  out.push_back(polyline.back());
  return out;
}

std::vector<Point2> smooth_and_resample(const std::vector<Point2>& raw, const PlanningMap& map,
                                        double spacing) {
  if (raw.size() < 2) return raw;
  std::vector<Point2> kept{raw.front()};
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    std::size_t j = raw.size() - 1;
    while (j > i + 1 && !map.segment_free(raw[i], raw[j])) --j;
    kept.push_back(raw[j]);
    i = j;
  }
  // Resample each kept segment on its own: a chord across a kept vertex
  // would cut into the inflated margin.
  std::vector<Point2> out{kept.front()};
  for (std::size_t k = 1; k < kept.size(); ++k) {
    const std::vector<Point2> piece = resample({kept[k - 1], kept[k]}, spacing);
    out.insert(out.end(), piece.begin() + 1, piece.end());
  }
  // Short segments leave gaps under half the spacing. Drop the point where
  // the merged chord is free and not too long; otherwise the vertex stays.
  const double lo = 0.5 * spacing;
  const double hi = 1.5 * spacing;
  for (std::size_t k = 1; k + 1 < out.size();) {
    const bool short_gap = distance(out[k - 1], out[k]) < lo || distance(out[k], out[k + 1]) < lo;
    if (short_gap && distance(out[k - 1], out[k + 1]) <= hi &&
        map.segment_free(out[k - 1], out[k + 1])) {
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
      k = std::max<std::size_t>(1, k - 1);
    } else {
      ++k;
    }
  }
  return out;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; keeps sampling identical
// across standard library implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class BucketGrid {
 public:
  BucketGrid(Point2 lo, Point2 hi, double size)
      : lo_(lo),
        size_(size),
        nx_(std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / size)))),
        ny_(std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / size)))),
        buckets_(static_cast<std::size_t>(nx_) * ny_) {}

  void insert(int id, Point2 p) { buckets_[bucket(p)].push_back(id); }

  int nearest(Point2 q, const std::vector<Point2>& pts) const {
    const auto [bx, by] = coords(q);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int y = by - ring; y <= by + ring; ++y) {
        if (y < 0 || y >= ny_) continue;
        const bool edge_row = y == by - ring || y == by + ring;
        for (int x = bx - ring; x <= bx + ring; x += edge_row ? 1 : 2 * ring) {
          if (x >= 0 && x < nx_) {
            for (int id : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
              const double d = distance(q, pts[id]);
              if (d < best_d || (d == best_d && id < best)) {
                best_d = d;
                best = id;
              }
            }
          }
          if (ring == 0) break;
        }
      }
      // Anything in a farther ring is at least ring * size away.
      if (best >= 0 && best_d <= ring * size_) break;
    }
    return best;
  }

  void near(Point2 q, double radius, const std::vector<Point2>& pts, std::vector<int>& out) const {
    out.clear();
    const auto [bx, by] = coords(q);
    const int reach = static_cast<int>(std::ceil(radius / size_));
    for (int y = std::max(0, by - reach); y <= std::min(ny_ - 1, by + reach); ++y)
      for (int x = std::max(0, bx - reach); x <= std::min(nx_ - 1, bx + reach); ++x)
        for (int id : buckets_[static_cast<std::size_t>(y) * nx_ + x])
          if (distance(q, pts[id]) <= radius) out.push_back(id);
    std::sort(out.begin(), out.end());
  }

 private:
  std::pair<int, int> coords(Point2 p) const {
    const int x = std::clamp(static_cast<int>(std::floor((p.x - lo_.x) / size_)), 0, nx_ - 1);
    const int y = std::clamp(static_cast<int>(std::floor((p.y - lo_.y) / size_)), 0, ny_ - 1);
    return {x, y};
  }
  std::size_t bucket(Point2 p) const {
    const auto [x, y] = coords(p);
    return static_cast<std::size_t>(y) * nx_ + x;
  }

  Point2 lo_;
  double size_;
  int nx_, ny_;
  std::vector<std::vector<int>> buckets_;
};

struct Tree {
  std::vector<Point2> pos;
  std::vector<int> parent;
  std::vector<double> cost;
  std::vector<std::vector<int>> children;

  int add(Point2 p, int par, double c) {
    const int id = static_cast<int>(pos.size());
    pos.push_back(p);
    parent.push_back(par);
    cost.push_back(c);
    children.emplace_back();
    if (par >= 0) children[par].push_back(id);
    return id;
  }

  void reparent(int id, int new_parent, double new_cost) {
    auto& siblings = children[parent[id]];
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    parent[id] = new_parent;
    children[new_parent].push_back(id);
    const double delta = new_cost - cost[id];
    std::vector<int> stack{id};
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      cost[n] += delta;
      for (int c : children[n]) stack.push_back(c);
    }
  }
};

}  // namespace

PlanResult plan_rrt_star(const PlanningMap& map, const PlanRequest& req) {
  req.validate();
  if (!map.traversable(req.start)) return {std::nullopt, "start is not in free space"};
  if (!map.traversable(req.goal)) return {std::nullopt, "goal is not in free space"};

  const GridMeta& meta = map.meta();
  const Point2 lo = meta.origin;
  const Point2 hi{meta.origin.x + meta.width * meta.resolution,
                  meta.origin.y + meta.height * meta.resolution};
  std::mt19937_64 rng(req.seed);
  Tree tree;
  BucketGrid buckets(lo, hi, req.rewire_radius);
  tree.add(req.start, -1, 0.0);
  buckets.insert(0, req.start);

  std::vector<int> goal_links;
  auto try_goal_link = [&](int id) {
    if (distance(tree.pos[id], req.goal) <= req.step && map.segment_free(tree.pos[id], req.goal))
      goal_links.push_back(id);
  };
  try_goal_link(0);

  std::vector<int> near;
  std::vector<int> order;
  std::vector<double> via;
  for (int it = 0; it < req.max_iterations; ++it) {
    const double u = unit(rng);
    const double sx = unit(rng);
    const double sy = unit(rng);
    const Point2 q = u < req.goal_bias
                         ? req.goal
                         : Point2{lo.x + sx * (hi.x - lo.x), lo.y + sy * (hi.y - lo.y)};
    const int nearest = buckets.nearest(q, tree.pos);
    const Point2 from = tree.pos[nearest];
    const double d = distance(from, q);
    if (d == 0.0) continue;
    const Point2 p = d <= req.step ? q : from + (req.step / d) * (q - from);
    if (!map.traversable(p)) continue;

    // Parent: cheapest neighbour whose edge is free, checked in cost order.
    buckets.near(p, req.rewire_radius, tree.pos, near);
    via.resize(near.size());
    order.resize(near.size());
    for (std::size_t k = 0; k < near.size(); ++k) via[k] = tree.cost[near[k]] + distance(tree.pos[near[k]], p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return via[a] < via[b]; });
    int parent = -1;
    double parent_cost = 0.0;
    for (int k : order) {
      if (map.segment_free(tree.pos[near[k]], p)) {
        parent = near[k];
        parent_cost = via[k];
        break;
      }
    }
    if (parent < 0) continue;
    const int id = tree.add(p, parent, parent_cost);
    buckets.insert(id, p);

    for (int n : near) {
      if (n == parent) continue;
      const double c = parent_cost + distance(p, tree.pos[n]);
      if (c < tree.cost[n] && map.segment_free(p, tree.pos[n])) tree.reparent(n, id, c);
    }
    try_goal_link(id);
  }

  if (goal_links.empty()) return {std::nullopt, "no path found within the iteration budget"};
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int id : goal_links) {
    const double c = tree.cost[id] + distance(tree.pos[id], req.goal);
    if (c < best_cost) {
      best_cost = c;
      best = id;
    }
  }

  PlannedPath out;
  for (int n = best; n >= 0; n = tree.parent[n]) out.raw.push_back(tree.pos[n]);
  std::reverse(out.raw.begin(), out.raw.end());
  if (!(out.raw.back() == req.goal)) out.raw.push_back(req.goal);
  if (out.raw.size() == 1) out.raw.push_back(req.goal);
  out.cost = best_cost;
  out.path = smooth_and_resample(out.raw, map, req.resample_spacing);
  out.length = polyline_length(out.path);
  return {std::move(out), {}};
}

}  // namespace bimsense
