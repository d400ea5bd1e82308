#include "bimsense/harness/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bimsense/errors.hpp"
#include "bimsense/grid/edt.hpp"
#include "bimsense/harness/map_io.hpp"
#include "bimsense/planner/frontier.hpp"
#include "bimsense/planner/planning_map.hpp"
#include "bimsense/planner/rrt_star.hpp"
#include "bimsense/uav/rescan.hpp"

namespace bimsense {

bool MissionRecord::completed() const {
  return goal_reached || (policy == Policy::kStaticBim && outcome == "halted");
}

Site load_site(const ScenarioConfig& config) {
  const ClassifiedMap map = load_map(config.map_path);
  std::vector<std::uint8_t> occupancy = occupancy_raster(map);
  std::vector<CellRect> openings;
  for (const WorldRect& r : config.openings) openings.push_back(to_cells(map.meta, r));
  std::vector<WorldEdit> edits;
  for (const EditSpec& e : config.edits)
    edits.push_back({e.kind, to_cells(map.meta, e.rect), e.time, e.label});
  BimPrior prior(map.meta, occupancy, config.bim_confidence, std::move(openings),
                 config.frozen_margin);
  GroundTruthWorld world(map.meta, std::move(occupancy), std::move(edits));
  return {std::move(prior), std::move(world)};
}

namespace {

constexpr double kArrived = 1e-9;

class Mission {
 public:
  Mission(const ScenarioConfig& cfg, const Site& site, std::uint64_t seed,
          const TickObserver& observer)
      : cfg_(cfg),
        prior_(site.prior),
        world_(site.world),
        meta_(prior_.meta()),
        seed_(seed),
        observer_(observer),
        grid_(OccupancyGrid::from_prior(prior_, cfg.fusion)),
        noise_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
    rec_.scenario = cfg.name;
    rec_.policy = cfg.policy;
    rec_.seed = seed;
    const Point2 s = cfg.start;
    const Point2 g = cfg.goal;
    pose_ = {s.x, s.y, std::atan2(g.y - s.y, g.x - s.x)};
  }

  MissionRecord run() {
    if (!meta_.in_bounds(cfg_.start) || !meta_.in_bounds(cfg_.goal))
      throw ConfigError("mission: start or goal outside the map");
    rec_.min_clearance = std::numeric_limits<double>::infinity();
    track_pose();
    for (int k = 0; k < cfg_.warmup_scans; ++k) {
      scan_and_fuse();
      advance_clock();
    }
    if (!plan_from_pose()) return finish("planning_failure");

    while (ticks_ < cfg_.tick_budget) {
      if (idx_ >= path_.size() && distance(pose_.position(), cfg_.goal) <= kArrived) {
        rec_.goal_reached = true;
        return finish("goal");
      }
      scan_and_fuse();
      const RiskReport report = assess_here();
      record_tick(report);
      if (observer_ && !observer_(snapshot())) return finish("stopped");

      if (report.triggered) {
        if (!rec_.first_trigger_distance) {
          rec_.first_trigger_distance = rec_.path_length;
          rec_.first_trigger_risk = report.corridor_risk;
          rec_.first_trigger_reason = report.reason;
        }
        if (cfg_.policy == Policy::kStaticBim) return finish("halted");
        if (static_cast<int>(rec_.interventions.size()) >= cfg_.max_interventions)
          return finish("intervention_limit");
        const bool ok = cfg_.policy == Policy::kUavAssisted ? uav_rescan(report)
                                                            : explore(report);
        if (!ok) return finish(outcome_);
        continue;
      }
      follow(cfg_.ugv_speed * cfg_.dt);
      advance_clock();
      track_pose();
    }
    return finish("tick_budget");
  }

 private:
  // ---- sensing and assessment ----

  void scan_and_fuse() {
    const std::span<const std::uint8_t> truth = world_.truth_at(time_);
    const Scan scan = raycast_scan(meta_, truth, pose_, cfg_.ugv_sensor, time_,
                                   cfg_.ugv_sensor.range_noise_sigma > 0.0 ? &noise_rng_ : nullptr);
    fuse_scan(grid_, prior_, scan);
  }

  void advance_clock() {
    ++ticks_;
    time_ = ticks_ * cfg_.dt + extra_time_;
  }

  void add_time(double seconds) {
    extra_time_ += seconds;
    time_ = ticks_ * cfg_.dt + extra_time_;
  }

  CellRect layer_region(const CellRect& core) const {
    const CellIndex here = meta_.cell_of(pose_.position());
    CellRect r{here.ix, here.iy, here.ix + 1, here.iy + 1};
    if (!core.empty())
      r = {std::min(r.x0, core.x0), std::min(r.y0, core.y0), std::max(r.x1, core.x1),
           std::max(r.y1, core.y1)};
    const int margin = static_cast<int>(std::ceil(cfg_.layer_margin / meta_.resolution));
    return r.grow(margin).intersect(meta_.bounds());
  }

  RiskReport assess_here() {
    window_ = forward_window(corridor_, pose_, cfg_.lookahead);
    if (cfg_.exclude_frozen) drop_masked(corridor_, window_, prior_.frozen_mask());
    layers_ = compute_layers(grid_, prior_, cfg_.occupied_threshold,
                             layer_region(window_bounds(corridor_, window_)));
    return assess(layers_, corridor_, window_, cfg_.risk);
  }

  void record_tick(const RiskReport& r) {
    TickRecord t;
    t.tick = ticks_;
    t.time = time_;
    t.distance = rec_.path_length;
    t.arc = window_.start;
    t.pose = pose_;
    t.risk = r.corridor_risk;
    t.mean_entropy = r.mean_entropy;
    t.mean_discrepancy = r.mean_discrepancy;
    t.min_clearance = r.min_clearance;
    t.empty_window = r.empty_window;
    t.trigger = r.triggered;
    t.reason = r.reason;
    rec_.trace.push_back(t);
  }

  MissionSnapshot snapshot() const {
    MissionSnapshot s;
    s.tick = ticks_;
    s.time = time_;
    s.grid = &grid_;
    s.prior = &prior_;
    s.layers = &layers_;
    s.path = &path_;
    s.corridor = &corridor_;
    s.window = &window_;
    s.roi = last_roi_;
    s.pose = pose_;
    return s;
  }

  // ---- motion ----

  void follow(double budget) {
    while (budget > 0.0 && idx_ < path_.size()) {
      const Point2 target = path_[idx_];
      const double d = distance(pose_.position(), target);
      if (d <= budget) {
        if (d > 0.0) move_to(target);
        budget -= d;
        ++idx_;
      } else {
        const Point2 here = pose_.position();
        move_to(here + (budget / d) * (target - here));
        budget = 0.0;
      }
    }
  }

  void move_to(Point2 p) {
    const Point2 here = pose_.position();
    rec_.path_length += distance(here, p);
    pose_ = {p.x, p.y, std::atan2(p.y - here.y, p.x - here.x)};
  }

  void track_pose() {
    rec_.executed.push_back(pose_.position());
    const double c = truth_clearance(pose_.position());
    rec_.min_clearance = std::min(rec_.min_clearance, c);
    if (!rec_.interventions.empty())
      rec_.min_clearance_after_intervention =
          std::min(rec_.min_clearance_after_intervention.value_or(c), c);
  }

  double truth_clearance(Point2 p) {
    const std::span<const std::uint8_t> truth = world_.truth_at(time_);
    if (truth_layers_.distance.empty() || !std::equal(truth.begin(), truth.end(),
                                                      truth_cache_.begin(), truth_cache_.end())) {
      truth_cache_.assign(truth.begin(), truth.end());
      truth_layers_.meta = meta_;
      truth_layers_.region = meta_.bounds();
      truth_layers_.distance = squared_distance_transform(truth_cache_, meta_.width, meta_.height);
      for (double& d : truth_layers_.distance) d = std::sqrt(d) * meta_.resolution;
    }
    return clearance_at(truth_layers_, p, cfg_.risk.r_ugv);
  }

  // ---- planning ----

  bool plan_from_pose() {
    const PlanningMap map(grid_, cfg_.inflation(), cfg_.occupied_threshold, cfg_.free_threshold);
    PlanRequest req = cfg_.planner;
    req.start = pose_.position();
    req.goal = cfg_.goal;
    req.seed = seed_ * 1000003ULL + plans_++;
    const PlanResult res = plan_rrt_star(map, req);
    if (!res.ok()) {
      outcome_ = "planning_failure";
      return false;
    }
    path_ = res.path->path;
    corridor_ = build_corridor(path_, cfg_.corridor_half_width, meta_);
    idx_ = 1;
    rec_.planned_paths.push_back(path_);
    return true;
  }

  // ---- responses ----

  bool uav_rescan(const RiskReport& before) {
    Intervention iv = begin_intervention("uav_rescan", before);
    const RiskRaster raster = window_raster(before);
    const int w = std::max(1, static_cast<int>(std::lround(cfg_.roi_width / meta_.resolution)));
    const int h = std::max(1, static_cast<int>(std::lround(cfg_.roi_height / meta_.resolution)));
    RegionOfInterest roi = extract_roi(raster, w, h, meta_);
    if (roi.rect.empty()) {
      const CellIndex c = meta_.cell_of(pose_.position());
      roi.rect = {c.ix, c.iy, c.ix + 1, c.iy + 1};
    }
    const SweepPlan sweep = plan_sweep(roi, meta_, cfg_.uav_sensor.range_max, cfg_.lane_spacing,
                                       cfg_.uav_altitude, cfg_.uav_speed);
    const OccupancyGrid candidate =
        execute_rescan(meta_, world_.truth_at(time_), sweep, prior_, cfg_.fusion,
                       {cfg_.uav_sensor, cfg_.uav_stride}, time_);
    grid_ = map_handoff(grid_, candidate, cfg_.handoff, roi.rect);
    add_time(sweep.duration);
    last_roi_ = roi.rect;
    iv.roi = roi.rect;
    iv.roi_mean_risk = roi.mean_risk;
    iv.duration = sweep.duration;
    iv.sweep_lanes = sweep.lanes;
    return end_intervention(iv);
  }

  bool explore(const RiskReport& before) {
    Intervention iv = begin_intervention("frontier_exploration", before);
    const double t0 = time_;
    const Point2 anchor = pose_.position();
    std::vector<Point2> visited;
    const double reach = 2.0 * cfg_.frontier_radius;
    const CellRect region =
        meta_.rect_covering({anchor.x - reach, anchor.y - reach}, {anchor.x + reach, anchor.y + reach});
    for (int step = 0; step < cfg_.frontier_max_steps && ticks_ < cfg_.tick_budget; ++step) {
      const PlanningMap map(grid_, cfg_.inflation(), cfg_.occupied_threshold, cfg_.free_threshold);
      layers_ = compute_layers(grid_, prior_, cfg_.occupied_threshold, region);
      const FrontierStep fs = frontier_explore_step(map, layers_, &prior_, pose_, anchor,
                                                    cfg_.frontier_radius, visited, cfg_.frontier);
      if (fs.done) break;
      ++iv.frontier_steps;
      visited.push_back(fs.centroid);
      travel(smooth_and_resample(fs.route, map, cfg_.planner.resample_spacing));
    }
    iv.duration = time_ - t0;
    return end_intervention(iv);
  }

  // Drives along a local route, scanning every tick; stops early when the
  // route ahead turns out to be blocked.
  void travel(const std::vector<Point2>& route) {
    std::vector<Point2> saved = std::move(path_);
    const std::size_t saved_idx = idx_;
    path_ = route;
    idx_ = 1;
    while (idx_ < path_.size() && ticks_ < cfg_.tick_budget) {
      if (blocked_ahead()) break;
      follow(cfg_.ugv_speed * cfg_.dt);
      advance_clock();
      track_pose();
      scan_and_fuse();
    }
    path_ = std::move(saved);
    idx_ = saved_idx;
  }

  bool blocked_ahead() const {
    const double radius = cfg_.risk.r_ugv;
    const int cells = static_cast<int>(std::ceil(radius / meta_.resolution));
    const std::size_t end = std::min(path_.size(), idx_ + 4);
    for (std::size_t k = idx_; k < end; ++k) {
      const CellIndex c = meta_.cell_of(path_[k]);
      for (int dy = -cells; dy <= cells; ++dy)
        for (int dx = -cells; dx <= cells; ++dx) {
          const CellIndex n{c.ix + dx, c.iy + dy};
          if (!meta_.in_bounds(n)) continue;
          if (distance(meta_.world_of(n), path_[k]) > radius) continue;
          if (grid_.probability(n) > cfg_.occupied_threshold) return true;
        }
    }
    return false;
  }

  Intervention begin_intervention(const char* kind, const RiskReport& before) {
    Intervention iv;
    iv.kind = kind;
    iv.tick = ticks_;
    iv.time = time_;
    iv.distance = rec_.path_length;
    iv.pose = pose_;
    iv.reason = before.reason;
    iv.risk_before = before.corridor_risk;
    iv.entropy_before = before.mean_entropy;
    iv.discrepancy_before = before.mean_discrepancy;
    return iv;
  }

  bool end_intervention(Intervention& iv) {
    iv.replanned = plan_from_pose();
    if (iv.replanned) {
      const RiskReport after = assess_here();
      iv.risk_after = after.corridor_risk;
      iv.entropy_after = after.mean_entropy;
    }
    rec_.interventions.push_back(iv);
    if (rec_.interventions.size() == 1) {
      if (iv.replanned && iv.risk_before > 0.0)
        rec_.delta_risk_pct = 100.0 * (iv.risk_before - iv.risk_after) / iv.risk_before;
      if (iv.replanned && iv.entropy_before > 0.0)
        rec_.delta_entropy_pct =
            100.0 * (iv.entropy_before - iv.entropy_after) / iv.entropy_before;
    }
    return iv.replanned;
  }

  MissionRecord finish(const std::string& outcome) {
    rec_.outcome = outcome;
    rec_.ticks = ticks_;
    rec_.mission_time = time_;
    return std::move(rec_);
  }

  const ScenarioConfig& cfg_;
  const BimPrior& prior_;
  GroundTruthWorld world_;
  GridMeta meta_;
  std::uint64_t seed_;
  const TickObserver& observer_;

  OccupancyGrid grid_;
  std::mt19937_64 noise_rng_;
  LayerStack layers_;
  LayerStack truth_layers_;
  std::vector<std::uint8_t> truth_cache_;
  Pose2D pose_;
  std::vector<Point2> path_;
  std::size_t idx_ = 0;
  Corridor corridor_;
  ForwardWindow window_;
  std::optional<CellRect> last_roi_;
  int ticks_ = 0;
  double extra_time_ = 0.0;
  double time_ = 0.0;
  std::uint64_t plans_ = 0;
  std::string outcome_;
  MissionRecord rec_;
};

}  // namespace

MissionRecord run_mission(const ScenarioConfig& config, const Site& site, std::uint64_t seed,
                          const TickObserver& observer) {
  return Mission(config, site, seed, observer).run();
}

MissionRecord run_mission(const ScenarioConfig& config, std::uint64_t seed) {
  const Site site = load_site(config);
  return run_mission(config, site, seed);
}

}  // namespace bimsense
