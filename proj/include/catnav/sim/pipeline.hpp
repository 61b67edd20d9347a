#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catnav/cache/visuosemantic_cache.hpp"
#include "catnav/costmap/occupancy_grid.hpp"
#include "catnav/costmap/pixel_costmap.hpp"
#include "catnav/planner/cost_layer.hpp"
#include "catnav/planner/types.hpp"
#include "catnav/providers/interfaces.hpp"
#include "catnav/reasoning/reasoner.hpp"
#include "catnav/sim/robot.hpp"

namespace catnav::sim {

struct PipelineConfig {
  cache::CacheConfig cache;
  planner::TrrtConfig planner;
  reasoning::ReasonerConfig reasoner;
  FollowerConfig follower;
  CameraModel camera;
  double selection_delay = 0.5;  // simulated provider latency, s
  double tick_rate = 10.0;       // Hz
  double timeout = 90.0;         // s of simulated time
  double goal_threshold = 0.5;
  double segment_epsilon = 0.1;
  double delta = costmap::kDefaultDelta;
  int stride = 2;
  double voxel = costmap::kDefaultVoxel;
  double window = costmap::kDefaultWindow;
  double planning_margin = 0.2;  // added to the modality footprint for planning
  double safety_margin = 0.1;    // added for the per-tick path check
  double collision_clearance = 0.05;
  std::vector<std::string> dynamic_labels{"person"};
  bool gps_goal = false;
  double gps_sigma = 0.3;
  int snapshot_every = 50;  // ticks between grid snapshots in the replay
  std::uint64_t embed_seed = 0x5eed;
};

void validate(const PipelineConfig& config);
Json to_json(const PipelineConfig& config);
/// Missing keys keep their defaults.
PipelineConfig pipeline_config_from_json(const Json& doc);

/// Known cell connected to the robot through cells with inflated cost <=
/// `ceiling` that borders unknown space (or holds the goal), nearest to the
/// goal and at least `min_distance` from the robot. nullopt when none exists.
std::optional<Pose2D> connected_frontier(const planner::CostLayer& layer, const Pose2D& robot, const Pose2D& goal,
                                         double ceiling, double min_distance);

struct PerceptionRecord {
  bool cache_hit = false;
  std::optional<double> d_min;
  std::optional<CostTable> fresh_table;  // set when the scene-risk provider was queried
  std::string costmap_digest;
  std::size_t static_points = 0;
  std::size_t dynamic_points = 0;
  std::vector<std::string> provider_errors;
};

/// Embed, novelty check, scene risk on a miss, segmentation, pixel costmap
/// and grid update for one frame. Dynamic classes only enter a per-frame
/// layer so moving agents leave no trail in the persistent grid.
class Perception {
 public:
  /// The grid lattice is aligned to (lattice_x, lattice_y).
  Perception(const PipelineConfig& config, providers::ProviderSet providers, RobotModality modality,
             const Pose2D& start, double lattice_x, double lattice_y);

  PerceptionRecord process(const providers::Observation& obs, const Pose2D& pose);

  const costmap::OccupancyGrid& grid() const noexcept { return grid_; }
  /// Persistent grid plus the latest dynamic layer; unknown cells under the
  /// robot footprint count as free.
  costmap::OccupancyGrid planning_grid(const Pose2D& pose) const;
  const CostTable& table() const noexcept { return table_; }
  const cache::VisuosemanticCache& cache() const noexcept { return cache_; }
  std::uint64_t scene_queries() const noexcept { return scene_queries_; }
  std::uint64_t cache_hits() const noexcept { return cache_hits_; }

 private:
  const PipelineConfig& config_;
  providers::ProviderSet providers_;
  RobotModality modality_;
  cache::VisuosemanticCache cache_;
  costmap::OccupancyGrid grid_;
  std::vector<costmap::RiskPoint> dynamic_;
  CostTable table_;
  std::uint64_t scene_queries_ = 0;
  std::uint64_t cache_hits_ = 0;
};

}  // namespace catnav::sim
