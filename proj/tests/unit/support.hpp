#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/grid_meta.hpp"
#include "bimsense/scan.hpp"

namespace bimsense::test {

inline GridMeta meta_of(int w, int h, double res = 0.1) {
  return GridMeta{w, h, res, {0.0, 0.0}};
}

/// Prior with nothing designed in: no frozen cells.
inline BimPrior empty_prior(const GridMeta& meta, double confidence = 0.7) {
  return BimPrior(meta, std::vector<std::uint8_t>(meta.cell_count(), 0), confidence, {}, 0.2);
}

inline std::vector<std::uint8_t> random_raster(std::mt19937_64& rng, std::size_t n,
                                               double density) {
  std::bernoulli_distribution occ(density);
  std::vector<std::uint8_t> out(n);
  for (auto& v : out) v = occ(rng) ? 1 : 0;
  return out;
}

/// Single-beam scan at `angle` (absolute) from `pose`.
inline Scan beam(Pose2D pose, double angle, double range, double range_max = 12.0) {
  Scan s;
  s.pose = pose;
  s.pose.yaw = 0.0;
  s.angle_min = angle;
  s.angle_max = angle;
  s.angle_increment = 1.0;
  s.range_max = range_max;
  s.ranges = {range};
  return s;
}

inline void fill_rect(std::vector<std::uint8_t>& raster, const GridMeta& meta, CellRect r,
                      std::uint8_t v = 1) {
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) raster[meta.index({x, y})] = v;
}

}  // namespace bimsense::test
