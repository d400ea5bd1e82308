#include "bimsense/grid/edt.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bimsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function f (lower envelope of
// parabolas rooted at each finite sample).
void transform_1d(const double* f, double* d, int n, std::vector<int>& v,
                  std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;  // z[0] is -inf, so k stays >= 0
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

void check(std::span<const std::uint8_t> features, int width, int height) {
  if (width <= 0 || height <= 0 ||
      features.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("distance transform: raster size mismatch");
}

}  // namespace

std::vector<double> squared_distance_transform(std::span<const std::uint8_t> features,
                                               int width, int height) {
  check(features, width, height);
  const std::size_t n = features.size();
  std::vector<double> out(n);
  const int longest = std::max(width, height);
  std::vector<double> f(longest), d(longest), z(longest + 1);
  std::vector<int> v(longest);

  // Columns first: exact 1-D distance along y to the nearest feature.
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y)
      f[y] = features[static_cast<std::size_t>(y) * width + x] ? 0.0 : kInf;
    transform_1d(f.data(), d.data(), height, v, z);
    for (int y = 0; y < height; ++y) out[static_cast<std::size_t>(y) * width + x] = d[y];
  }
  // Then rows over the column result.
  for (int y = 0; y < height; ++y) {
    double* row = out.data() + static_cast<std::size_t>(y) * width;
    std::copy(row, row + width, f.begin());
    transform_1d(f.data(), d.data(), width, v, z);
    std::copy(d.begin(), d.begin() + width, row);
  }
  return out;
}

std::vector<double> squared_distance_transform_brute(std::span<const std::uint8_t> features,
                                                     int width, int height) {
  check(features, width, height);
  std::vector<double> out(features.size(), kInf);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double best = kInf;
      for (int fy = 0; fy < height; ++fy)
        for (int fx = 0; fx < width; ++fx) {
          if (!features[static_cast<std::size_t>(fy) * width + fx]) continue;
          const double dx = x - fx;
          const double dy = y - fy;
          best = std::min(best, dx * dx + dy * dy);
        }
      out[static_cast<std::size_t>(y) * width + x] = best;
    }
  return out;
}

}  // namespace bimsense
