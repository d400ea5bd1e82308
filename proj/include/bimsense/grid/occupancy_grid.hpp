#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bimsense/grid_meta.hpp"
#include "bimsense/scan.hpp"

namespace bimsense {

class BimPrior;

/// Inverse-sensor-model probabilities and the log-odds clip range.
struct FusionParams {
  double p_occ = 0.9;
  double p_free = 0.35;
  double l_min = -5.0;
  double l_max = 5.0;

  double hit_increment() const { return std::log(p_occ / (1.0 - p_occ)); }
  double miss_increment() const { return std::log(p_free / (1.0 - p_free)); }

  /// Throws ConfigError unless 0.5 < p_occ < 1, 0 < p_free < 0.5 and
  /// l_min < 0 < l_max.
  void validate() const;

  friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

inline double logodds_to_probability(double l) { return 1.0 / (1.0 + std::exp(-l)); }
inline double probability_to_logodds(double p) { return std::log(p / (1.0 - p)); }

/// Per-cell log-odds occupancy on a fixed raster. Values always lie inside
/// [l_min, l_max].
class OccupancyGrid {
 public:
  OccupancyGrid(GridMeta meta, FusionParams params, double initial_logodds = 0.0);

  /// Every cell starts at the soft-prior log-odds ln(pi_0 / (1 - pi_0)).
  static OccupancyGrid from_prior(const BimPrior& prior, const FusionParams& params);

  const GridMeta& meta() const { return meta_; }
  const FusionParams& params() const { return params_; }

  std::span<const double> logodds() const { return logodds_; }
  double logodds(std::size_t i) const { return logodds_[i]; }
  double logodds(CellIndex c) const { return logodds_[meta_.index(c)]; }
  double probability(CellIndex c) const { return logodds_to_probability(logodds(c)); }

  void set_logodds(std::size_t i, double l) { logodds_[i] = clip(l); }

  /// L <- clip(L + delta).
  void add_evidence(std::size_t i, double delta) { logodds_[i] = clip(logodds_[i] + delta); }

  double clip(double l) const { return std::clamp(l, params_.l_min, params_.l_max); }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  GridMeta meta_;
  FusionParams params_;
  std::vector<double> logodds_;
};

/// Optional per-cell counter of beam traversals, for coverage bookkeeping.
using TouchCounter = std::vector<std::uint32_t>;

/// Fuses one scan with the inverse sensor model: the cell a returning beam
/// terminates in gets the hit increment, every cell the beam crosses before
/// it gets the miss increment, and beams without a return clear the whole
/// ray up to range_max. Each beam contributes independently, so a cell
/// crossed by several beams receives several increments. Frozen cells of
/// the prior are never modified. Returns the number of increments applied.
///
/// Throws ConfigError if grid and prior disagree on geometry and
/// DomainError if the scan origin lies off the grid.
std::size_t fuse_scan(OccupancyGrid& grid, const BimPrior& prior, const Scan& scan,
                      TouchCounter* touches = nullptr);

}  // namespace bimsense
