#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "bimsense/geometry.hpp"

namespace bimsense {

struct CellIndex {
  int ix = 0;  // column, along +x
  int iy = 0;  // row, along +y

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Inclusive-exclusive cell rectangle [x0, x1) x [y0, y1).
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  std::size_t area() const {
    return empty() ? 0 : static_cast<std::size_t>(width()) * height();
  }
  bool contains(CellIndex c) const {
    return c.ix >= x0 && c.ix < x1 && c.iy >= y0 && c.iy < y1;
  }
  CellRect intersect(const CellRect& o) const {
    CellRect r{std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1),
               std::min(y1, o.y1)};
    if (r.empty()) return {};
    return r;
  }
  CellRect grow(int cells) const {
    return {x0 - cells, y0 - cells, x1 + cells, y1 + cells};
  }
  friend bool operator==(const CellRect&, const CellRect&) = default;
};

/// Raster geometry shared by every grid: size, cell edge length and the
/// world position of the lower-left corner of cell (0, 0).
struct GridMeta {
  int width = 0;
  int height = 0;
  double resolution = 0.1;
  Point2 origin{};

  bool valid() const { return width > 0 && height > 0 && resolution > 0.0; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  CellRect bounds() const { return {0, 0, width, height}; }

  bool in_bounds(CellIndex c) const {
    return c.ix >= 0 && c.iy >= 0 && c.ix < width && c.iy < height;
  }
  bool in_bounds(Point2 p) const {
    return p.x >= origin.x && p.y >= origin.y &&
           p.x < origin.x + width * resolution &&
           p.y < origin.y + height * resolution;
  }

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.iy) * width + c.ix;
  }
  CellIndex cell_at(std::size_t i) const {
    return {static_cast<int>(i % width), static_cast<int>(i / width)};
  }

  /// Cell containing p (may be out of bounds).
  CellIndex cell_of(Point2 p) const {
    return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
            static_cast<int>(std::floor((p.y - origin.y) / resolution))};
  }
  Point2 world_of(CellIndex c) const {
    return {origin.x + (c.ix + 0.5) * resolution,
            origin.y + (c.iy + 0.5) * resolution};
  }

  /// Smallest cell rectangle covering the axis-aligned box [lo, hi],
  /// clipped to the grid.
  CellRect rect_covering(Point2 lo, Point2 hi) const {
    const CellIndex a = cell_of(lo);
    const CellIndex b = cell_of(hi);
    return CellRect{a.ix, a.iy, b.ix + 1, b.iy + 1}.intersect(bounds());
  }

  friend bool operator==(const GridMeta&, const GridMeta&) = default;
};

}  // namespace bimsense
