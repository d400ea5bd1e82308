#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bimsense/grid_meta.hpp"

namespace bimsense {

/// The as-designed occupancy raster rasterized from the building model,
/// together with the soft-prior confidence and the mask of cells that scan
/// fusion must never touch.
///
/// Frozen cells are every cell within `frozen_margin` meters (Euclidean,
/// center to center, rounded up to whole cells) of an as-designed occupied
/// cell, minus the declared opening rectangles.
class BimPrior {
 public:
  static constexpr double kMinConfidence = 0.6;
  static constexpr double kMaxConfidence = 0.9;

  BimPrior(GridMeta meta, std::vector<std::uint8_t> occupancy, double confidence,
           std::vector<CellRect> openings = {}, double frozen_margin = 0.2);

  const GridMeta& meta() const { return meta_; }
  double confidence() const { return confidence_; }
  double frozen_margin() const { return frozen_margin_; }
  const std::vector<CellRect>& openings() const { return openings_; }

  std::span<const std::uint8_t> occupancy() const { return occupancy_; }
  std::span<const std::uint8_t> frozen_mask() const { return frozen_; }

  bool occupied(CellIndex c) const { return occupancy_[meta_.index(c)] != 0; }
  bool frozen(std::size_t i) const { return frozen_[i] != 0; }
  bool frozen(CellIndex c) const { return frozen(meta_.index(c)); }

  /// pi_0: confidence where the model is occupied, 1 - confidence elsewhere.
  double prior_probability(std::size_t i) const {
    return occupancy_[i] ? confidence_ : 1.0 - confidence_;
  }
  /// L_0 = ln(pi_0 / (1 - pi_0)).
  double prior_logodds(std::size_t i) const {
    return occupancy_[i] ? occupied_logodds_ : -occupied_logodds_;
  }

  /// Frozen-margin radius in whole cells.
  int margin_cells() const;

 private:
  void build_frozen_mask();

  GridMeta meta_;
  std::vector<std::uint8_t> occupancy_;
  double confidence_;
  std::vector<CellRect> openings_;
  double frozen_margin_;
  double occupied_logodds_;
  std::vector<std::uint8_t> frozen_;
};

}  // namespace bimsense
