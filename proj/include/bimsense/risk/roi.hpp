#pragma once

#include <cstddef>

#include "bimsense/risk/assess.hpp"

namespace bimsense {

struct RegionOfInterest {
  CellRect rect;
  double mean_risk = 0.0;
  Point2 anchor;  // world position of the rectangle center
  std::size_t size = 0;
  bool degenerate = false;  // raster smaller than the requested shape
};

/// Slides a roi_width x roi_height rectangle over the raster and returns
/// the placement with the largest mean (sum / (roi_width * roi_height)),
/// ties going to the smallest row-major origin cell. Uses a summed-area
/// table, so the cost is linear in the raster size. When the raster is
/// smaller than the shape the whole raster is returned.
RegionOfInterest extract_roi(const RiskRaster& raster, int roi_width, int roi_height,
                             const GridMeta& meta);

}  // namespace bimsense
