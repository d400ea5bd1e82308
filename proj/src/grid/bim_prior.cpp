#include "bimsense/grid/bim_prior.hpp"

#include <cmath>
#include <string>

#include "bimsense/errors.hpp"
#include "bimsense/grid/edt.hpp"

namespace bimsense {

BimPrior::BimPrior(GridMeta meta, std::vector<std::uint8_t> occupancy, double confidence,
                   std::vector<CellRect> openings, double frozen_margin)
    : meta_(meta),
      occupancy_(std::move(occupancy)),
      confidence_(confidence),
      openings_(std::move(openings)),
      frozen_margin_(frozen_margin),
      occupied_logodds_(0.0) {
  if (!meta_.valid()) throw ConfigError("BIM prior: invalid grid geometry");
  if (occupancy_.size() != meta_.cell_count())
    throw ConfigError("BIM prior: raster size does not match grid geometry");
  if (!(confidence_ >= kMinConfidence && confidence_ <= kMaxConfidence))
    throw ConfigError("BIM prior: confidence " + std::to_string(confidence_) +
                      " outside [0.6, 0.9]");
  if (frozen_margin_ < 0.0) throw ConfigError("BIM prior: negative frozen margin");
  for (const CellRect& r : openings_)
    if (r.empty() || r.intersect(meta_.bounds()) != r)
      throw ConfigError("BIM prior: opening rectangle empty or outside the grid");
  for (auto& v : occupancy_) v = v ? 1 : 0;
  occupied_logodds_ = std::log(confidence_ / (1.0 - confidence_));
  build_frozen_mask();
}

int BimPrior::margin_cells() const {
  return static_cast<int>(std::ceil(frozen_margin_ / meta_.resolution - 1e-9));
}

void BimPrior::build_frozen_mask() {
  const auto d2 = squared_distance_transform(occupancy_, meta_.width, meta_.height);
  const double r = margin_cells();
  frozen_.assign(occupancy_.size(), 0);
  for (std::size_t i = 0; i < d2.size(); ++i) frozen_[i] = d2[i] <= r * r ? 1 : 0;
  for (const CellRect& o : openings_)
    for (int y = o.y0; y < o.y1; ++y)
      for (int x = o.x0; x < o.x1; ++x) frozen_[meta_.index({x, y})] = 0;
}

}  // namespace bimsense
