#include "bimsense/grid/layers.hpp"

#include <cmath>

#include "bimsense/errors.hpp"
#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/grid/edt.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/simd/kernels.hpp"

namespace bimsense {

LayerStack compute_layers(const OccupancyGrid& grid, const BimPrior& prior,
                          double occupied_threshold) {
  return compute_layers(grid, prior, occupied_threshold, grid.meta().bounds());
}

LayerStack compute_layers(const OccupancyGrid& grid, const BimPrior& prior,
                          double occupied_threshold, CellRect region) {
  const GridMeta& meta = grid.meta();
  if (!(meta == prior.meta()))
    throw ConfigError("compute_layers: grid and prior geometry differ");

  LayerStack out;
  out.meta = meta;
  out.region = region.intersect(meta.bounds());
  out.occupied_threshold = occupied_threshold;
  const int w = out.region.width();
  const int h = out.region.height();
  const std::size_t n = out.region.area();
  out.probability.resize(n);
  out.entropy.resize(n);
  out.discrepancy.resize(n);
  out.distance.resize(n);
  if (n == 0) return out;

  const auto logodds = grid.logodds();
  const auto design = prior.occupancy();
  for (int y = 0; y < h; ++y) {
    const std::size_t src = meta.index({out.region.x0, out.region.y0 + y});
    const std::size_t dst = static_cast<std::size_t>(y) * w;
    simd::fill_layers(logodds.subspan(src, w), design.subspan(src, w),
                      std::span(out.probability).subspan(dst, w),
                      std::span(out.entropy).subspan(dst, w),
                      std::span(out.discrepancy).subspan(dst, w));
  }

  std::vector<std::uint8_t> occupied(n);
  for (std::size_t i = 0; i < n; ++i) occupied[i] = out.probability[i] > occupied_threshold;
  const auto d2 = squared_distance_transform(occupied, w, h);
  for (std::size_t i = 0; i < n; ++i) out.distance[i] = std::sqrt(d2[i]) * meta.resolution;
  return out;
}

namespace {

CellIndex require_cell(const LayerStack& layers, Point2 p) {
  const CellIndex c = layers.meta.cell_of(p);
  if (!layers.covers(c)) throw DomainError("layer query outside the computed region");
  return c;
}

}  // namespace

double clearance_at(const LayerStack& layers, Point2 p, double robot_radius) {
  require_cell(layers, p);
  const GridMeta& m = layers.meta;
  const CellRect& r = layers.region;
  // Continuous coordinates where cell centers sit on integers.
  const double gx = (p.x - m.origin.x) / m.resolution - 0.5;
  const double gy = (p.y - m.origin.y) / m.resolution - 0.5;
  const int x0 = static_cast<int>(std::floor(gx));
  const int y0 = static_cast<int>(std::floor(gy));
  const double fx = gx - x0;
  const double fy = gy - y0;
  auto sample = [&](int x, int y) {
    x = std::clamp(x, r.x0, r.x1 - 1);
    y = std::clamp(y, r.y0, r.y1 - 1);
    return layers.distance_at({x, y});
  };
  const double d00 = sample(x0, y0);
  const double d10 = sample(x0 + 1, y0);
  const double d01 = sample(x0, y0 + 1);
  const double d11 = sample(x0 + 1, y0 + 1);
  double d;
  if (std::isinf(d00) || std::isinf(d10) || std::isinf(d01) || std::isinf(d11)) {
    d = layers.distance_at(require_cell(layers, p));
  } else {
    d = (1 - fy) * ((1 - fx) * d00 + fx * d10) + fy * ((1 - fx) * d01 + fx * d11);
  }
  return d - robot_radius;
}

double entropy_at(const LayerStack& layers, Point2 p) {
  return layers.entropy_at(require_cell(layers, p));
}

double discrepancy_at(const LayerStack& layers, Point2 p) {
  return layers.discrepancy_at(require_cell(layers, p));
}

}  // namespace bimsense
