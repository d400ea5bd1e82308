#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "bimsense/grid/layers.hpp"
#include "bimsense/risk/corridor.hpp"

namespace bimsense {

struct RiskParams {
  double alpha = 0.5;      // weight of entropy
  double beta = 0.5;       // weight of discrepancy
  double tau_safe = 0.5;   // corridor-risk threshold
  double m_min = 0.3;      // minimum clearance margin, meters
  double r_ugv = 0.3;      // robot radius, meters

  void validate() const;
};

enum class TriggerReason : std::uint8_t { kNone, kRisk, kClearance, kBoth };
std::string_view to_string(TriggerReason r);

struct RiskReport {
  std::vector<CellIndex> window_cells;  // window cells inside the corridor
  std::vector<double> cell_risk;        // alpha * H + beta * D, parallel
  double corridor_risk = 0.0;           // mean of cell_risk
  double mean_entropy = 0.0;
  double mean_discrepancy = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  bool empty_window = true;
  bool triggered = false;
  TriggerReason reason = TriggerReason::kNone;
  double alpha = 0.5;
  double beta = 0.5;
};

/// Aggregates per-cell risk over the window, samples clearance every grid
/// cell of arc length along the look-ahead path, and applies the dual
/// trigger (risk above tau_safe, or clearance below m_min). An empty window
/// yields zero risk and no trigger. Throws DomainError if the layers do not
/// cover the window.
RiskReport assess(const LayerStack& layers, const Corridor& corridor,
                  const ForwardWindow& window, const RiskParams& params);

/// Risk values over the window's bounding rectangle; cells that are not in
/// the window hold zero.
struct RiskRaster {
  CellRect rect;
  std::vector<double> values;  // row-major over rect

  double at(CellIndex c) const {
    return values[static_cast<std::size_t>(c.iy - rect.y0) * rect.width() + (c.ix - rect.x0)];
  }
};

RiskRaster window_raster(const RiskReport& report);

}  // namespace bimsense
