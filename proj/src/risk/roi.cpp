#include "bimsense/risk/roi.hpp"

#include <vector>

#include "bimsense/errors.hpp"

namespace bimsense {

namespace {

// Sums closer than this are ties; keeps the row-major tie-break stable
// against summed-area rounding.
constexpr double kTieTolerance = 1e-9;

RegionOfInterest make_roi(CellRect rect, double sum, int divisor, const GridMeta& meta) {
  RegionOfInterest roi;
  roi.rect = rect;
  roi.size = rect.area();
  roi.mean_risk = divisor > 0 ? sum / divisor : 0.0;
  roi.anchor = {meta.origin.x + 0.5 * (rect.x0 + rect.x1) * meta.resolution,
                meta.origin.y + 0.5 * (rect.y0 + rect.y1) * meta.resolution};
  return roi;
}

}  // namespace

RegionOfInterest extract_roi(const RiskRaster& raster, int roi_width, int roi_height,
                             const GridMeta& meta) {
  if (roi_width <= 0 || roi_height <= 0) throw ConfigError("roi: non-positive shape");
  const CellRect& r = raster.rect;
  const int w = r.width();
  const int h = r.height();
  if (r.empty()) return {};

  // Summed-area table with a zero border row/column.
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  auto S = [&](int x, int y) -> double& { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += raster.values[static_cast<std::size_t>(y) * w + x];
      S(x + 1, y + 1) = S(x + 1, y) + row;
    }
  }

  if (w < roi_width || h < roi_height) {
    RegionOfInterest roi = make_roi(r, S(w, h), static_cast<int>(r.area()), meta);
    roi.degenerate = true;
    return roi;
  }

  double best = -1.0;
  int bx = 0, by = 0;
  for (int y = 0; y + roi_height <= h; ++y)
    for (int x = 0; x + roi_width <= w; ++x) {
      const double sum = S(x + roi_width, y + roi_height) - S(x, y + roi_height) -
                         S(x + roi_width, y) + S(x, y);
      if (sum > best + kTieTolerance) {
        best = sum;
        bx = x;
        by = y;
      }
    }
  const CellRect rect{r.x0 + bx, r.y0 + by, r.x0 + bx + roi_width, r.y0 + by + roi_height};
  return make_roi(rect, best, roi_width * roi_height, meta);
}

}  // namespace bimsense
