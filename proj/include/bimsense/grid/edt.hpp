#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bimsense {

/// Exact squared Euclidean distance transform of a binary raster (row-major,
/// width x height, nonzero = feature). Distances are between cell centers in
/// cell units; cells are +inf when the raster has no feature. Separable
/// lower-envelope algorithm (Felzenszwalb & Huttenlocher), O(width * height).
std::vector<double> squared_distance_transform(std::span<const std::uint8_t> features,
                                               int width, int height);

/// Brute-force reference: minimum over all features. O(n * features); for
/// tests and tiny rasters only.
std::vector<double> squared_distance_transform_brute(std::span<const std::uint8_t> features,
                                                     int width, int height);

}  // namespace bimsense
