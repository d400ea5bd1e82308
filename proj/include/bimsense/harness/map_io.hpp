#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bimsense/grid_meta.hpp"

namespace bimsense {

class OccupancyGrid;

enum class CellClass : std::uint8_t { kFree = 0, kOccupied = 1, kUnknown = 2 };

/// Ternary map as stored in a PGM image plus YAML sidecar. Row 0 of
/// `cells` is the bottom row of the map (lowest y); images store the top
/// row first.
struct ClassifiedMap {
  GridMeta meta;
  std::vector<CellClass> cells;
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
};

/// Reads the YAML sidecar (keys image, resolution, origin, occupied_thresh,
/// free_thresh, negate) and the binary PGM it names. A pixel value v maps
/// to p = (255 - v) / 255, or v / 255 with negate set; p > occupied_thresh
/// is occupied, p < free_thresh is free, anything else unknown. Throws
/// ParseError (with the byte offset into the offending file) on malformed
/// input.
ClassifiedMap load_map(const std::filesystem::path& yaml_path);

/// Decodes a P5 image; 8-bit only.
struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // top row first
};
PgmImage parse_pgm(const std::string& bytes);

/// Writes `<stem>.pgm` and `<stem>.yaml` next to each other (free 254,
/// occupied 0, unknown 205; negate 0).
void save_map(const ClassifiedMap& map, const std::filesystem::path& yaml_path);

/// Classification of a fused grid: probability above occupied_thresh is
/// occupied, below free_thresh free.
ClassifiedMap classify(const OccupancyGrid& grid, double occupied_thresh = 0.65,
                       double free_thresh = 0.35);

/// Occupied cells as a binary raster (1 = occupied; unknown counts as free).
std::vector<std::uint8_t> occupancy_raster(const ClassifiedMap& map);

}  // namespace bimsense
