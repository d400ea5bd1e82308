#include "bimsense/harness/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bimsense/errors.hpp"
#include "bimsense/simd/kernels.hpp"

namespace bimsense {

namespace {

using Rgb = std::array<int, 3>;

constexpr Rgb kFree{24, 24, 32};
constexpr Rgb kUnknown{72, 72, 72};
constexpr Rgb kOccupied{150, 150, 150};
constexpr Rgb kEntropyGain{40, 60, 110};
constexpr int kCorridorTint = 40;
constexpr Rgb kPath{40, 220, 40};
constexpr Rgb kRoi{230, 40, 40};
constexpr Rgb kPose{250, 220, 30};

class Canvas {
 public:
  explicit Canvas(const GridMeta& meta) : meta_(meta) {
    img_.width = meta.width;
    img_.height = meta.height;
    img_.rgb.assign(3 * meta.cell_count(), 0);
  }

  void set(CellIndex c, Rgb v) {
    if (!meta_.in_bounds(c)) return;
    const std::size_t i = offset(c);
    for (int k = 0; k < 3; ++k) img_.rgb[i + k] = static_cast<std::uint8_t>(std::clamp(v[k], 0, 255));
  }

  Rgb get(CellIndex c) const {
    const std::size_t i = offset(c);
    return {img_.rgb[i], img_.rgb[i + 1], img_.rgb[i + 2]};
  }

  void line(Point2 a, Point2 b, Rgb v) {
    const double len = distance(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(len / (0.5 * meta_.resolution))));
    for (int k = 0; k <= n; ++k) set(meta_.cell_of(a + (static_cast<double>(k) / n) * (b - a)), v);
  }

  Image take() { return std::move(img_); }

 private:
  std::size_t offset(CellIndex c) const {
    const int row = meta_.height - 1 - c.iy;
    return 3 * (static_cast<std::size_t>(row) * meta_.width + c.ix);
  }

  GridMeta meta_;
  Image img_;
};

}  // namespace

Image render(const RenderInput& in) {
  if (!in.grid || !in.prior) throw ConfigError("render: grid and prior are required");
  const GridMeta& meta = in.grid->meta();
  const std::size_t n = meta.cell_count();
  std::vector<double> prob(n), entropy(n), disc(n);
  simd::fill_layers(simd::Level::kScalar, in.grid->logodds(), in.prior->occupancy(), prob,
                    entropy, disc);

  Canvas canvas(meta);
  for (std::size_t i = 0; i < n; ++i) {
    const Rgb& base = prob[i] > 0.65 ? kOccupied : prob[i] < 0.35 ? kFree : kUnknown;
    Rgb v;
    for (int k = 0; k < 3; ++k)
      v[k] = base[k] + static_cast<int>(std::lround(entropy[i] * kEntropyGain[k]));
    canvas.set(meta.cell_at(i), v);
  }
  if (in.corridor) {
    for (const CellIndex& c : in.corridor->cells) {
      if (!meta.in_bounds(c)) continue;
      Rgb v = canvas.get(c);
      v[0] += kCorridorTint;
      canvas.set(c, v);
    }
  }
  if (in.path) {
    for (std::size_t k = 1; k < in.path->size(); ++k)
      canvas.line((*in.path)[k - 1], (*in.path)[k], kPath);
  }
  if (in.roi && !in.roi->empty()) {
    const CellRect& r = *in.roi;
    for (int x = r.x0; x < r.x1; ++x) {
      canvas.set({x, r.y0}, kRoi);
      canvas.set({x, r.y1 - 1}, kRoi);
    }
    for (int y = r.y0; y < r.y1; ++y) {
      canvas.set({r.x0, y}, kRoi);
      canvas.set({r.x1 - 1, y}, kRoi);
    }
  }
  if (in.pose) {
    const CellIndex c = meta.cell_of(in.pose->position());
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx) canvas.set({c.ix + dx, c.iy + dy}, kPose);
  }
  return canvas.take();
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

void render_snapshot(const RenderInput& in, const std::filesystem::path& out) {
  const std::string bytes = encode_ppm(render(in));
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + out.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace bimsense
