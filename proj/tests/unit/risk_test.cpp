#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "bimsense/errors.hpp"
#include "bimsense/grid/layers.hpp"
#include "bimsense/grid/occupancy_grid.hpp"
#include "bimsense/risk/assess.hpp"
#include "bimsense/risk/corridor.hpp"
#include "bimsense/risk/roi.hpp"
#include "bimsense/world/world.hpp"

using namespace bimsense;
using namespace bimsense::test;

namespace {

// Cells whose centers are within d of a segment, plus cells the segments
// pass through (slab test against every cell box).
std::set<CellIndex> brute_corridor(const std::vector<Point2>& path, double d, const GridMeta& m) {
  std::set<CellIndex> out;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      const Point2 c = m.world_of({x, y});
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        if (project_onto_segment(c, path[k], path[k + 1]).distance <= d) {
          out.insert({x, y});
          break;
        }
        const Point2 a = path[k], b = path[k + 1];
        const double x0 = m.origin.x + x * m.resolution, x1 = x0 + m.resolution;
        const double y0 = m.origin.y + y * m.resolution, y1 = y0 + m.resolution;
        double lo = 0.0, hi = 1.0;
        bool miss = false;
        auto slab = [&](double o, double dd, double b0, double b1) {
          if (dd == 0.0) {
            if (o < b0 || o >= b1) miss = true;
            return;
          }
          double t0 = (b0 - o) / dd, t1 = (b1 - o) / dd;
          if (t0 > t1) std::swap(t0, t1);
          lo = std::max(lo, t0);
          hi = std::min(hi, t1);
        };
        slab(a.x, b.x - a.x, x0, x1);
        slab(a.y, b.y - a.y, y0, y1);
        if (!miss && hi - lo > 1e-9) {
          out.insert({x, y});
          break;
        }
      }
    }
  return out;
}

std::set<CellIndex> as_set(const Corridor& c) { return {c.cells.begin(), c.cells.end()}; }

LayerStack flat_layers(const GridMeta& m, double h, double d, double dist) {
  LayerStack ls;
  ls.meta = m;
  ls.region = m.bounds();
  ls.probability.assign(m.cell_count(), 0.5);
  ls.entropy.assign(m.cell_count(), h);
  ls.discrepancy.assign(m.cell_count(), d);
  ls.distance.assign(m.cell_count(), dist);
  return ls;
}

struct Straight {
  GridMeta meta = meta_of(250, 60);
  std::vector<Point2> path{{1.0, 3.0}, {21.0, 3.0}};
  Corridor corridor = build_corridor(path, 0.5, meta);
};

RegionOfInterest brute_roi(const RiskRaster& r, int w, int h) {
  RegionOfInterest best;
  double best_sum = -1.0;
  for (int y = r.rect.y0; y + h <= r.rect.y1; ++y)
    for (int x = r.rect.x0; x + w <= r.rect.x1; ++x) {
      double s = 0.0;
      for (int yy = y; yy < y + h; ++yy)
        for (int xx = x; xx < x + w; ++xx) s += r.at({xx, yy});
      // strict > keeps the first placement in row-major order on ties
      if (s > best_sum + 1e-12) {
        best_sum = s;
        best.rect = {x, y, x + w, y + h};
        best.mean_risk = s / (w * h);
      }
    }
  return best;
}

RiskRaster random_raster_values(std::mt19937_64& rng, int w, int h, bool integers) {
  RiskRaster r;
  r.rect = {7, 3, 7 + w, 3 + h};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < w * h; ++i)
    r.values.push_back(integers ? static_cast<double>(rng() % 3) * 0.25 : u(rng));
  return r;
}

}  // namespace

TEST_SUITE("corridor") {
  TEST_CASE("straight band matches the brute-force oracle") {
    const GridMeta m = meta_of(150, 50);
    const std::vector<Point2> path{{1.0, 2.05}, {11.0, 2.05}};
    const Corridor c = build_corridor(path, 0.5, m);
    CHECK(as_set(c) == brute_corridor(path, 0.5, m));
    // 10 or 11 rows over the 100-cell span (the band edge falls on cell
    // centers), plus the rounded caps
    CHECK(c.cells.size() >= 1000);
    CHECK(c.cells.size() <= 1100 + 2 * 80);
    CHECK(c.length() == doctest::Approx(10.0));
  }

  TEST_CASE("narrow band degenerates to the cells on the path") {
    const GridMeta m = meta_of(60, 40);
    const std::vector<Point2> path{{1.05, 2.05}, {3.05, 2.05}};
    const Corridor c = build_corridor(path, 0.02, m);
    std::set<CellIndex> expect;
    for (int x = 10; x <= 30; ++x) expect.insert({x, 20});
    CHECK(as_set(c) == expect);

    const std::vector<Point2> diag{{1.03, 1.07}, {3.41, 2.93}};
    CHECK(as_set(build_corridor(diag, 0.01, m)) == brute_corridor(diag, 0.01, m));
  }

  TEST_CASE("L-shaped and random polylines match the oracle") {
    const GridMeta m = meta_of(80, 80);
    const std::vector<Point2> ell{{1.0, 1.0}, {6.0, 1.0}, {6.0, 7.0}};
    const Corridor c = build_corridor(ell, 0.6, m);
    CHECK(as_set(c) == brute_corridor(ell, 0.6, m));
    // the outside of the bend is filled: the corner cell diagonal from the vertex
    CHECK(as_set(c).count(m.cell_of({6.3, 0.7})) == 1);

    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> u(0.5, 7.5);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Point2> p;
      for (int k = 0; k < 4; ++k) p.push_back({u(rng), u(rng)});
      const double d = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
      CHECK(as_set(build_corridor(p, d, m)) == brute_corridor(p, d, m));
    }
  }

  TEST_CASE("corridor bookkeeping invariants") {
    const GridMeta m = meta_of(80, 80);
    const std::vector<Point2> p{{1.0, 1.0}, {6.0, 1.5}, {4.0, 7.0}, {7.5, 7.5}};
    const Corridor c = build_corridor(p, 0.5, m);
    for (std::size_t k = 1; k < c.arc.size(); ++k) CHECK(c.arc[k] > c.arc[k - 1]);
    REQUIRE(c.cell_arc.size() == c.cells.size());
    for (std::size_t i = 0; i < c.cells.size(); ++i) {
      const Point2 w = m.world_of(c.cells[i]);
      const auto proj = c.project(w);
      CHECK(c.cell_arc[i] == doctest::Approx(proj.arc));
      // brute nearest distance over segments
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k + 1 < p.size(); ++k)
        best = std::min(best, project_onto_segment(w, p[k], p[k + 1]).distance);
      CHECK(proj.distance == doctest::Approx(best));
    }
    CHECK(std::is_sorted(c.cells.begin(), c.cells.end(), [](CellIndex a, CellIndex b) {
      return a.iy != b.iy ? a.iy < b.iy : a.ix < b.ix;
    }));
  }

  TEST_CASE("degenerate paths are rejected") {
    const GridMeta m = meta_of(50, 50);
    const std::vector<Point2> one{{1.0, 1.0}};
    const std::vector<Point2> dup{{1.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}};
    const std::vector<Point2> off{{1.0, 1.0}, {9.0, 1.0}};
    CHECK_THROWS_AS(build_corridor(one, 0.5, m), ConfigError);
    CHECK_THROWS_AS(build_corridor(dup, 0.5, m), ConfigError);
    CHECK_THROWS_AS(build_corridor(off, 0.5, m), ConfigError);
  }

  TEST_CASE("forward window slices by arc length") {
    const Straight s;
    const Corridor& c = s.corridor;

    const ForwardWindow all = forward_window(c, Pose2D{1.0, 3.0, 0.0}, 100.0);
    CHECK(all.members.size() == c.cells.size());

    const ForwardWindow mid = forward_window(c, Pose2D{11.0, 3.0, 0.0}, 5.0);
    CHECK(mid.start == doctest::Approx(10.0));
    CHECK(mid.end == doctest::Approx(15.0));
    std::size_t expect = 0;
    for (double a : c.cell_arc)
      if (a >= 10.0 && a <= 15.0) ++expect;
    CHECK(mid.members.size() == expect);
    for (std::size_t i : mid.members) {
      CHECK(c.cell_arc[i] >= 10.0);
      CHECK(c.cell_arc[i] <= 15.0);
    }
    CHECK_FALSE(mid.off_corridor);

    const ForwardWindow tail = forward_window(c, Pose2D{21.0, 3.0, 0.0}, 5.0);
    CHECK(tail.end == doctest::Approx(20.0));
    for (std::size_t i : tail.members) CHECK(c.cell_arc[i] == doctest::Approx(20.0));

    const ForwardWindow off = forward_window(c, Pose2D{11.0, 4.5, 0.0}, 5.0);
    CHECK(off.off_corridor);
    CHECK(off.start == doctest::Approx(10.0));
  }

  TEST_CASE("masked cells drop out of the window") {
    const Straight s;
    ForwardWindow w = forward_window(s.corridor, 0.0, 5.0);
    const std::size_t before = w.members.size();
    std::vector<std::uint8_t> mask(s.meta.cell_count(), 0);
    for (int x = 0; x < s.meta.width; ++x) mask[s.meta.index({x, 30})] = 1;
    drop_masked(s.corridor, w, mask);
    CHECK(w.members.size() < before);
    for (std::size_t i : w.members) CHECK(s.corridor.cells[i].iy != 30);
    std::vector<std::uint8_t> wrong(5, 0);
    CHECK_THROWS_AS(drop_masked(s.corridor, w, wrong), ConfigError);
  }
}

TEST_SUITE("assess") {
  TEST_CASE("confirmed map does not trigger") {
    const Straight s;
    const LayerStack ls = flat_layers(s.meta, 0.0, 0.0, 2.0);
    const ForwardWindow w = forward_window(s.corridor, 5.0, 5.0);
    const RiskReport r = assess(ls, s.corridor, w, {});
    CHECK(r.corridor_risk == 0.0);
    CHECK_FALSE(r.triggered);
    CHECK(r.reason == TriggerReason::kNone);
    CHECK(r.min_clearance == doctest::Approx(1.7));
    CHECK_FALSE(r.empty_window);
  }

  TEST_CASE("maximal risk triggers on risk") {
    const Straight s;
    const LayerStack ls = flat_layers(s.meta, 1.0, 1.0, 2.0);
    const RiskReport r = assess(ls, s.corridor, forward_window(s.corridor, 5.0, 5.0), {});
    CHECK(r.corridor_risk == doctest::Approx(1.0));
    CHECK(r.triggered);
    CHECK(r.reason == TriggerReason::kRisk);
  }

  TEST_CASE("clearance alone triggers") {
    const Straight s;
    const LayerStack ls = flat_layers(s.meta, 0.1, 0.1, 0.55);  // clr 0.25 < 0.3
    const RiskReport r = assess(ls, s.corridor, forward_window(s.corridor, 5.0, 5.0), {});
    CHECK(r.corridor_risk == doctest::Approx(0.1));
    CHECK(r.min_clearance == doctest::Approx(0.25));
    CHECK(r.triggered);
    CHECK(r.reason == TriggerReason::kClearance);

    const LayerStack both = flat_layers(s.meta, 0.9, 0.9, 0.55);
    CHECK(assess(both, s.corridor, forward_window(s.corridor, 5.0, 5.0), {}).reason ==
          TriggerReason::kBoth);
  }

  TEST_CASE("clearance is sampled along the look-ahead path only") {
    const Straight s;
    LayerStack ls = flat_layers(s.meta, 0.0, 0.0, 2.0);
    // a pinch just behind the window and one just ahead of it
    for (int y : {29, 30}) {
      ls.distance[s.meta.index({50, y})] = 0.0;
      ls.distance[s.meta.index({110, y})] = 0.0;
    }
    const RiskReport r = assess(ls, s.corridor, forward_window(s.corridor, 5.5, 5.0), {});
    CHECK(r.min_clearance > 0.3);
    for (int x = 88; x < 93; ++x)
      for (int y : {29, 30}) ls.distance[s.meta.index({x, y})] = 0.4;
    const RiskReport r2 = assess(ls, s.corridor, forward_window(s.corridor, 5.5, 5.0), {});
    CHECK(r2.min_clearance < 0.3);
    CHECK(r2.reason == TriggerReason::kClearance);
  }

  TEST_CASE("mean over the window, permutation and scaling") {
    const Straight s;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LayerStack ls = flat_layers(s.meta, 0.0, 0.0, 2.0);
    for (auto& v : ls.entropy) v = u(rng);
    for (auto& v : ls.discrepancy) v = u(rng);
    ForwardWindow w = forward_window(s.corridor, 3.0, 5.0);
    const RiskReport r = assess(ls, s.corridor, w, {});
    double sum = 0.0;
    for (std::size_t i : w.members) {
      const std::size_t gi = s.meta.index(s.corridor.cells[i]);
      sum += 0.5 * ls.entropy[gi] + 0.5 * ls.discrepancy[gi];
    }
    CHECK(r.corridor_risk == doctest::Approx(sum / w.members.size()).epsilon(1e-12));
    CHECK(r.window_cells.size() == w.members.size());

    std::shuffle(w.members.begin(), w.members.end(), rng);
    CHECK(assess(ls, s.corridor, w, {}).corridor_risk ==
          doctest::Approx(r.corridor_risk).epsilon(1e-12));

    RiskParams scaled{};
    scaled.alpha = 0.5 * 1.6;
    scaled.beta = 0.5 * 1.6;
    const RiskReport rs = assess(ls, s.corridor, w, scaled);
    CHECK(rs.corridor_risk == doctest::Approx(1.6 * r.corridor_risk).epsilon(1e-12));
    const RiskRaster a = window_raster(r), b = window_raster(rs);
    CHECK(extract_roi(a, 20, 8, s.meta).rect == extract_roi(b, 20, 8, s.meta).rect);
    // the decision follows only when tau scales with the weights
    RiskParams tau{};
    tau.tau_safe = r.corridor_risk - 0.01;
    RiskParams tau_scaled = scaled;
    tau_scaled.tau_safe = 1.6 * tau.tau_safe;
    CHECK(assess(ls, s.corridor, w, tau).triggered ==
          assess(ls, s.corridor, w, tau_scaled).triggered);
  }

  TEST_CASE("adding risk never turns a risk trigger off") {
    const Straight s;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.3, 0.8);
    LayerStack ls = flat_layers(s.meta, 0.0, 0.0, 2.0);
    for (auto& v : ls.entropy) v = u(rng);
    for (auto& v : ls.discrepancy) v = u(rng);
    const ForwardWindow w = forward_window(s.corridor, 3.0, 5.0);
    RiskParams p{};
    p.tau_safe = assess(ls, s.corridor, w, {}).corridor_risk - 0.02;
    REQUIRE(assess(ls, s.corridor, w, p).triggered);
    for (int k = 0; k < 200; ++k) {
      const std::size_t i = w.members[rng() % w.members.size()];
      const std::size_t gi = s.meta.index(s.corridor.cells[i]);
      ls.entropy[gi] = std::min(1.0, ls.entropy[gi] + 0.2);
      CHECK(assess(ls, s.corridor, w, p).triggered);
    }
  }

  TEST_CASE("empty window and coverage errors") {
    const Straight s;
    const LayerStack ls = flat_layers(s.meta, 1.0, 1.0, 2.0);
    ForwardWindow w = forward_window(s.corridor, 3.0, 5.0);
    w.members.clear();
    const RiskReport r = assess(ls, s.corridor, w, {});
    CHECK(r.empty_window);
    CHECK(r.corridor_risk == 0.0);
    CHECK_FALSE(r.triggered);

    LayerStack part = ls;
    part.region = {0, 0, 50, 60};
    CHECK_THROWS_AS(assess(part, s.corridor, forward_window(s.corridor, 10.0, 5.0), {}),
                    DomainError);
  }

  TEST_CASE("a well-mapped site that matches its design stays quiet") {
    const GridMeta m = meta_of(200, 80);
    std::vector<std::uint8_t> design(m.cell_count(), 0);
    fill_rect(design, m, {0, 0, 200, 2});
    fill_rect(design, m, {0, 78, 200, 80});
    fill_rect(design, m, {0, 0, 2, 80});
    fill_rect(design, m, {198, 0, 200, 80});
    const BimPrior prior(m, design, 0.67);
    GroundTruthWorld world(m, design);
    OccupancyGrid g = OccupancyGrid::from_prior(prior, {});
    SensorSpec spec;
    spec.range_max = 12.0;
    for (double x = 1.0; x <= 19.0; x += 0.5)
      for (double y : {2.0, 4.0, 6.0})
        fuse_scan(g, prior, raycast_scan(world, {x, y, 0.0}, spec, 0.0));
    const LayerStack ls = compute_layers(g, prior, 0.65);
    const std::vector<Point2> path{{2.0, 4.0}, {18.0, 4.0}};
    const Corridor c = build_corridor(path, 1.0, m);
    for (double s0 = 0.0; s0 < 16.0; s0 += 1.0) {
      const RiskReport r = assess(ls, c, forward_window(c, s0, 5.0), {});
      CHECK_FALSE(r.triggered);
      CHECK(r.corridor_risk < 0.05);
    }
  }
}

TEST_SUITE("roi") {
  TEST_CASE("summed-area search equals the brute-force argmax") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      const bool ties = trial % 3 == 0;
      const int w = 5 + static_cast<int>(rng() % 26);
      const int h = 5 + static_cast<int>(rng() % 26);
      const RiskRaster r = random_raster_values(rng, w, h, ties);
      const int rw = 1 + static_cast<int>(rng() % w);
      const int rh = 1 + static_cast<int>(rng() % h);
      const RegionOfInterest got = extract_roi(r, rw, rh, meta_of(100, 100));
      const RegionOfInterest want = brute_roi(r, rw, rh);
      CAPTURE(trial);
      CHECK(got.rect == want.rect);
      CHECK(got.mean_risk == doctest::Approx(want.mean_risk).epsilon(1e-12));
      CHECK(got.size == static_cast<std::size_t>(rw * rh));
    }
  }

  TEST_CASE("30x30 raster with a 5x5 shape") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const RiskRaster r = random_raster_values(rng, 30, 30, false);
      CHECK(extract_roi(r, 5, 5, meta_of(100, 100)).rect == brute_roi(r, 5, 5).rect);
    }
  }

  TEST_CASE("ties, point mass and the degenerate fallback") {
    const GridMeta m = meta_of(100, 100);
    RiskRaster u{{10, 20, 40, 50}, std::vector<double>(900, 0.3)};
    const RegionOfInterest a = extract_roi(u, 5, 5, m);
    CHECK(a.rect == CellRect{10, 20, 15, 25});
    CHECK(a.mean_risk == doctest::Approx(0.3));
    CHECK(a.anchor.x == doctest::Approx(1.25));
    CHECK(a.anchor.y == doctest::Approx(2.25));

    RiskRaster hot{{10, 20, 40, 50}, std::vector<double>(900, 0.0)};
    hot.values[17 * 30 + 22] = 1.0;
    const RegionOfInterest b = extract_roi(hot, 5, 5, m);
    CHECK(b.rect.contains({32, 37}));
    CHECK(b.mean_risk == doctest::Approx(1.0 / 25));

    RiskRaster small{{0, 0, 3, 4}, std::vector<double>(12, 0.2)};
    const RegionOfInterest c = extract_roi(small, 5, 5, m);
    CHECK(c.degenerate);
    CHECK(c.rect == small.rect);
  }
}
