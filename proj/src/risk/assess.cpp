#include "bimsense/risk/assess.hpp"

#include <algorithm>
#include <cmath>

#include "bimsense/errors.hpp"
#include "bimsense/simd/kernels.hpp"

namespace bimsense {

void RiskParams::validate() const {
  if (alpha < 0.0 || beta < 0.0) throw ConfigError("risk: negative weight");
  if (r_ugv < 0.0) throw ConfigError("risk: negative robot radius");
}

std::string_view to_string(TriggerReason r) {
  switch (r) {
    case TriggerReason::kNone:
      return "none";
    case TriggerReason::kRisk:
      return "risk";
    case TriggerReason::kClearance:
      return "clearance";
    case TriggerReason::kBoth:
      return "both";
  }
  return "none";
}

RiskReport assess(const LayerStack& layers, const Corridor& corridor,
                  const ForwardWindow& window, const RiskParams& params) {
  RiskReport r;
  r.alpha = params.alpha;
  r.beta = params.beta;
  const std::size_t n = window.members.size();
  r.window_cells.reserve(n);
  std::vector<double> h(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const CellIndex c = corridor.cells[window.members[k]];
    if (!layers.covers(c)) throw DomainError("assess: layers do not cover the window");
    r.window_cells.push_back(c);
    h[k] = layers.entropy_at(c);
    d[k] = layers.discrepancy_at(c);
  }
  r.cell_risk.resize(n);
  simd::combine_risk(h, d, params.alpha, params.beta, r.cell_risk);

  r.empty_window = n == 0;
  if (!r.empty_window) {
    double sr = 0.0, sh = 0.0, sd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sr += r.cell_risk[k];
      sh += h[k];
      sd += d[k];
    }
    r.corridor_risk = sr / n;
    r.mean_entropy = sh / n;
    r.mean_discrepancy = sd / n;
  }

  // Look-ahead path samples, one per cell of arc length, end included.
  const double step = layers.meta.resolution;
  for (int k = 0;; ++k) {
    const double at = std::min(window.start + k * step, window.end);
    r.min_clearance =
        std::min(r.min_clearance, clearance_at(layers, corridor.point_at(at), params.r_ugv));
    if (at >= window.end) break;
  }

  const bool risky = !r.empty_window && r.corridor_risk > params.tau_safe;
  const bool tight = r.min_clearance < params.m_min;
  r.triggered = risky || tight;
  r.reason = risky && tight ? TriggerReason::kBoth
             : risky        ? TriggerReason::kRisk
             : tight        ? TriggerReason::kClearance
                            : TriggerReason::kNone;
  return r;
}

RiskRaster window_raster(const RiskReport& report) {
  RiskRaster out;
  if (report.window_cells.empty()) return out;
  CellRect r{report.window_cells[0].ix, report.window_cells[0].iy, 0, 0};
  r.x1 = r.x0 + 1;
  r.y1 = r.y0 + 1;
  for (const CellIndex& c : report.window_cells) {
    r.x0 = std::min(r.x0, c.ix);
    r.y0 = std::min(r.y0, c.iy);
    r.x1 = std::max(r.x1, c.ix + 1);
    r.y1 = std::max(r.y1, c.iy + 1);
  }
  out.rect = r;
  out.values.assign(r.area(), 0.0);
  for (std::size_t k = 0; k < report.window_cells.size(); ++k) {
    const CellIndex c = report.window_cells[k];
    out.values[static_cast<std::size_t>(c.iy - r.y0) * r.width() + (c.ix - r.x0)] =
        report.cell_risk[k];
  }
  return out;
}

}  // namespace bimsense
