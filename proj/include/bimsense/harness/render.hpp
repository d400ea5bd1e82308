#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid/bim_prior.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/risk/corridor.hpp"

namespace bimsense {

/// Fixed palette, one pixel per cell, top image row = highest y.
///   free (p < 0.35)        base (24, 24, 32)
///   unknown                base (72, 72, 72)
///   occupied (p > 0.65)    base (150, 150, 150)
///   entropy overlay        + round(H * (40, 60, 110)), H in bits
///   corridor cells         red channel + 40
///   path polyline          (40, 220, 40)
///   ROI outline            (230, 40, 40)
///   robot pose             (250, 220, 30)
struct RenderInput {
  const OccupancyGrid* grid = nullptr;
  const BimPrior* prior = nullptr;
  const std::vector<Point2>* path = nullptr;
  const Corridor* corridor = nullptr;
  std::optional<CellRect> roi;
  std::optional<Pose2D> pose;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  std::array<std::uint8_t, 3> at(int x, int row) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(row) * width + x);
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

Image render(const RenderInput& in);

/// Binary PPM (P6) bytes.
std::string encode_ppm(const Image& img);

void render_snapshot(const RenderInput& in, const std::filesystem::path& out);

}  // namespace bimsense
