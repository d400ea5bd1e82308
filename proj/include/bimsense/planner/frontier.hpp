#pragma once

#include <optional>
#include <vector>

#include "bimsense/geometry.hpp"
#include "bimsense/grid/layers.hpp"
#include "bimsense/planner/planning_map.hpp"

namespace bimsense {

class BimPrior;

struct FrontierParams {
  double free_threshold = 0.35;     // probability below which a cell is free
  double unknown_entropy = 0.9;     // bits above which a cell counts as unknown
  std::size_t min_cluster_size = 1;
  double exclusion_radius = 1.0;    // meters around previously visited targets
};

struct FrontierCluster {
  std::vector<CellIndex> cells;
  Point2 centroid;
};

struct FrontierStep {
  bool done = true;
  Point2 waypoint;            // reachable cell center closest to the centroid
  Point2 centroid;            // of the chosen cluster
  std::vector<Point2> route;  // grid route from the pose to the waypoint
  double radius_used = 0.0;
  std::size_t clusters_seen = 0;
};

/// Frontier cells inside `radius` of the pose: free cells with an
/// 8-neighbour whose entropy exceeds the unknown threshold. Cells frozen by
/// the prior never count as unknown. Clusters are 8-connected components.
std::vector<FrontierCluster> find_frontiers(const LayerStack& layers, const BimPrior* prior,
                                            Point2 center, double radius,
                                            const FrontierParams& params = {});

/// Nearest reachable frontier cluster (by centroid distance), where
/// reachable means connected to the pose through traversable cells.
/// Targets within the exclusion radius of an entry in `visited` are
/// skipped. If frontiers exist but none is reachable, the radius grows by
/// half once before giving up. `layers` must cover the search square.
FrontierStep frontier_explore_step(const PlanningMap& map, const LayerStack& layers,
                                   const BimPrior* prior, Pose2D pose, double radius,
                                   const std::vector<Point2>& visited = {},
                                   const FrontierParams& params = {});

/// Same, with the frontier search disc centered at `center` instead of the
/// pose (routes still start at the pose).
FrontierStep frontier_explore_step(const PlanningMap& map, const LayerStack& layers,
                                   const BimPrior* prior, Pose2D pose, Point2 center,
                                   double radius, const std::vector<Point2>& visited = {},
                                   const FrontierParams& params = {});

}  // namespace bimsense
