#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "bimsense/errors.hpp"
#include "bimsense/grid/layers.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/risk/roi.hpp"
#include "bimsense/uav/rescan.hpp"
#include "bimsense/world/world.hpp"

using namespace bimsense;
using namespace bimsense::test;

namespace {

RegionOfInterest roi_of(CellRect r, const GridMeta& m) {
  RegionOfInterest roi;
  roi.rect = r;
  roi.size = r.area();
  const Point2 lo = m.world_of({r.x0, r.y0});
  const Point2 hi = m.world_of({r.x1 - 1, r.y1 - 1});
  roi.anchor = 0.5 * (lo + hi);
  return roi;
}

RescanParams uav(double range) {
  RescanParams p;
  p.sensor.range_max = range;
  p.stride = 0.25;
  return p;
}

// Site used by the rescan cases: 30 m x 20 m room, a designed wall at
// x = 15 m with an opening declared over part of it.
struct Site {
  GridMeta meta = meta_of(300, 200);
  std::vector<std::uint8_t> design;
  CellRect partition{150, 2, 152, 198};
  CellRect opening{148, 60, 154, 100};
  Site() : design(meta.cell_count(), 0) {
    fill_rect(design, meta, {0, 0, 300, 2});
    fill_rect(design, meta, {0, 198, 300, 200});
    fill_rect(design, meta, {0, 0, 2, 200});
    fill_rect(design, meta, {298, 0, 300, 200});
    fill_rect(design, meta, partition);
  }
  BimPrior prior() const { return BimPrior(meta, design, 0.67, {opening}, 0.2); }
};

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("lane count follows ceil(span / spacing) + 1") {
    const GridMeta m = meta_of(500, 500);
    const auto roi = roi_of({100, 100, 150, 150}, m);  // 5 m x 5 m
    const SweepPlan p = plan_sweep(roi, m, 0.0, 2.0, 2.5, 2.0);
    CHECK(p.coverage == roi.rect);
    // cell-center span 4.9 m
    CHECK(p.lanes == 4);
    CHECK(p.waypoints.size() == 8);
    CHECK(p.lane_spacing <= 2.0);
    CHECK(p.altitude == 2.5);
    CHECK(p.duration == doctest::Approx(p.length / 2.0));
  }

  TEST_CASE("degenerate and narrow rectangles") {
    const GridMeta m = meta_of(100, 100);
    const SweepPlan one = plan_sweep(roi_of({40, 40, 41, 41}, m), m, 0.0, 2.0, 2.5, 2.0);
    CHECK(one.lanes == 1);
    CHECK(one.waypoints.size() == 2);

    const SweepPlan two = plan_sweep(roi_of({10, 40, 60, 50}, m), m, 0.0, 2.0, 2.5, 2.0);
    CHECK(two.lanes_along_x);
    CHECK(two.lanes == 2);
    CHECK(two.waypoints[0].y == doctest::Approx(4.05));
    CHECK(two.waypoints[2].y == doctest::Approx(4.95));

    CHECK_THROWS_AS(plan_sweep(roi_of({5, 5, 5, 9}, m), m, 0.0, 2.0, 2.5, 2.0), ConfigError);
  }

  TEST_CASE("serpentine along the long side") {
    const GridMeta m = meta_of(500, 500);
    const SweepPlan p = plan_sweep(roi_of({100, 100, 130, 180}, m), m, 1.0, 1.5, 2.5, 2.0);
    CHECK_FALSE(p.lanes_along_x);
    CHECK(p.coverage == CellRect{90, 90, 140, 190});
    REQUIRE(p.waypoints.size() == 2 * static_cast<std::size_t>(p.lanes));
    for (int k = 0; k < p.lanes; ++k) {
      const Point2 a = p.waypoints[2 * k], b = p.waypoints[2 * k + 1];
      CHECK(a.x == b.x);
      // alternate directions
      CHECK(((b.y > a.y) == (k % 2 == 0)));
      if (k > 0) CHECK(a.y == p.waypoints[2 * k - 1].y);
    }
  }

  TEST_CASE("every coverage cell is near a lane and gets a beam") {
    const GridMeta m = meta_of(300, 300);
    std::vector<std::uint8_t> truth(m.cell_count(), 0);
    const BimPrior prior = empty_prior(m);
    for (double range : {2.0, 5.0}) {
      const auto roi = roi_of({120, 110, 170, 160}, m);
      const SweepPlan p = plan_sweep(roi, m, range, 2.5, 2.5, 3.0);
      TouchCounter touches;
      execute_rescan(m, truth, p, prior, {}, uav(range), 0.0, &touches);
      for (int y = p.coverage.y0; y < p.coverage.y1; ++y)
        for (int x = p.coverage.x0; x < p.coverage.x1; ++x) {
          const Point2 c = m.world_of({x, y});
          double best = 1e9;
          for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k)
            best = std::min(best, project_onto_segment(c, p.waypoints[k], p.waypoints[k + 1]).distance);
          CHECK(best <= range);
          CHECK(touches[m.index({x, y})] >= 1);
        }
    }
  }

  TEST_CASE("samples are evenly spaced along the sweep") {
    const GridMeta m = meta_of(300, 300);
    const SweepPlan p = plan_sweep(roi_of({120, 110, 170, 160}, m), m, 2.0, 2.5, 2.5, 3.0);
    const auto s = sweep_samples(p, 0.25);
    CHECK(s.front() == p.waypoints.front());
    CHECK(s.back() == p.waypoints.back());
    CHECK(static_cast<double>(s.size()) >= p.length / 0.25);
    for (std::size_t k = 0; k + 1 < s.size(); ++k) CHECK(distance(s[k], s[k + 1]) <= 0.25 + 1e-9);
  }
}

TEST_SUITE("rescan") {
  TEST_CASE("unchanged site confirms the design") {
    const Site s;
    const BimPrior prior = s.prior();
    const GridMeta& m = s.meta;
    const SweepPlan p = plan_sweep(roi_of({120, 60, 170, 110}, m), m, 5.0, 2.5, 2.5, 3.0);
    TouchCounter touches;
    const OccupancyGrid g = execute_rescan(m, s.design, p, prior, {}, uav(5.0), 0.0, &touches);
    const LayerStack ls = compute_layers(g, prior, 0.65);
    std::size_t swept = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      if (!touches[i]) continue;
      ++swept;
      CHECK(ls.discrepancy[i] < 0.5);
    }
    CHECK(swept > 1000);
  }

  TEST_CASE("new and removed walls are picked up, unseen cells keep the prior") {
    const Site s;
    const BimPrior prior = s.prior();
    const GridMeta& m = s.meta;
    const CellRect new_wall{100, 70, 101, 100};
    const CellRect removed{150, 62, 152, 98};  // inside the opening
    const CellRect removed_frozen{150, 120, 152, 150};
    GroundTruthWorld world(m, s.design,
                           {{EditKind::kAdd, new_wall, 0.0, "W"},
                            {EditKind::kRemove, removed, 0.0, "R"},
                            {EditKind::kRemove, removed_frozen, 0.0, "R2"}});
    const auto truth = world.apply_edits(0.0);
    const SweepPlan p = plan_sweep(roi_of({100, 60, 150, 110}, m), m, 5.0, 2.5, 2.5, 3.0);
    TouchCounter touches;
    const OccupancyGrid g = execute_rescan(m, truth, p, prior, {}, uav(5.0), 0.0, &touches);
    const OccupancyGrid init = OccupancyGrid::from_prior(prior, {});

    std::size_t seen_wall = 0;
    for (int y = new_wall.y0; y < new_wall.y1; ++y)
      for (int x = new_wall.x0; x < new_wall.x1; ++x) {
        const std::size_t i = m.index({x, y});
        if (touches[i] >= 2) {
          ++seen_wall;
          CHECK(g.probability({x, y}) > 0.9);
        }
      }
    CHECK(seen_wall >= 25);

    std::size_t cleared = 0;
    for (int y = removed.y0; y < removed.y1; ++y)
      for (int x = removed.x0; x < removed.x1; ++x)
        if (touches[m.index({x, y})] >= 3) {
          ++cleared;
          CHECK(g.probability({x, y}) < 0.35);
        }
    CHECK(cleared >= 40);

    for (int y = removed_frozen.y0; y < removed_frozen.y1; ++y)
      for (int x = removed_frozen.x0; x < removed_frozen.x1; ++x)
        CHECK(g.logodds(CellIndex{x, y}) == init.logodds(CellIndex{x, y}));

    std::size_t untouched = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i)
      if (!touches[i]) {
        ++untouched;
        CHECK(g.logodds(i) == init.logodds(i));
      }
    CHECK(untouched > 10000);
  }

  TEST_CASE("mean entropy over swept cells drops") {
    const Site s;
    const BimPrior prior = s.prior();
    const GridMeta& m = s.meta;
    GroundTruthWorld world(m, s.design, {{EditKind::kAdd, {100, 70, 103, 100}, 0.0, "W"}});
    const auto truth = world.apply_edits(0.0);
    const OccupancyGrid before = OccupancyGrid::from_prior(prior, {});
    const SweepPlan p = plan_sweep(roi_of({100, 60, 150, 110}, m), m, 5.0, 2.5, 2.5, 3.0);
    TouchCounter touches;
    const OccupancyGrid after = execute_rescan(m, truth, p, prior, {}, uav(5.0), 0.0, &touches);
    const LayerStack lb = compute_layers(before, prior, 0.65);
    const LayerStack la = compute_layers(after, prior, 0.65);
    double hb = 0.0, ha = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i)
      if (touches[i]) {
        hb += lb.entropy[i];
        ha += la.entropy[i];
        ++n;
      }
    REQUIRE(n > 0);
    CHECK(ha / n < hb / n);
  }
}

TEST_SUITE("handoff") {
  TEST_CASE("full replace returns the rescan verbatim") {
    const GridMeta m = meta_of(100, 100);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    OccupancyGrid cur(m, {}, 0.0), resc(m, {}, 0.0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      cur.set_logodds(i, u(rng));
      resc.set_logodds(i, u(rng));
    }
    CHECK(map_handoff(cur, resc, HandoffMode::kFullReplace) == resc);
    CHECK(map_handoff(cur, resc, HandoffMode::kRoiPaste, {}) == cur);

    const CellRect roi{20, 30, 70, 80};
    const OccupancyGrid out = map_handoff(cur, resc, HandoffMode::kRoiPaste, roi);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      const bool inside = roi.contains(m.cell_at(i));
      if (out.logodds(i) != cur.logodds(i)) ++diff;
      CHECK(out.logodds(i) == (inside ? resc.logodds(i) : cur.logodds(i)));
    }
    CHECK(diff == 2500);

    CHECK_THROWS_AS(map_handoff(cur, OccupancyGrid(meta_of(100, 99), {}, 0.0),
                                HandoffMode::kFullReplace),
                    ConfigError);
  }
}
