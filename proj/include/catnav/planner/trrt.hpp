#pragma once

#include <optional>

#include "catnav/core/random.hpp"
#include "catnav/planner/cost_layer.hpp"
#include "catnav/planner/types.hpp"

namespace catnav::planner {

/// Boltzmann transition test with optional adaptive temperature.
class TransitionTest {
 public:
  explicit TransitionTest(const TrrtConfig& config);

  bool accept(double cost_from, double cost_to, Rng& rng);

  double temperature() const noexcept { return temperature_; }
  int consecutive_failures() const noexcept { return failures_; }

 private:
  double initial_temperature_;
  double temperature_;
  double rate_;
  double k_b_;
  double ceiling_;
  int n_fail_max_;
  bool adaptive_;
  int failures_ = 0;
};

enum class PlanStatus { kOk, kNoPath, kStartInfeasible, kGoalInfeasible };

std::string_view to_string(PlanStatus status);

struct PlanResult {
  PlanStatus status = PlanStatus::kNoPath;
  std::optional<PlannedPath> path;
  int iterations = 0;
  std::size_t tree_size = 0;
};

PlanResult trrt_plan(const CostLayer& layer, const Pose2D& start, const Pose2D& goal, const TrrtConfig& config);
PlanResult trrt_plan(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                     const TrrtConfig& config);

/// Line integral of raw cell cost along the path.
double path_cost(const PlannedPath& path, const costmap::OccupancyGrid& grid, double unknown_cost = 0.2);
double path_cost(const std::vector<Pose2D>& waypoints, const CostLayer& layer, bool use_inflation);

/// Last observed cell with risk <= ceiling along the start->goal Bresenham
/// ray before the first unknown or unsafe cell. Returns the goal when the
/// whole ray is safe and start when the first step is not.
Pose2D select_frontier_subgoal(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                               double ceiling = 0.5);
/// Same walk, judging safety by the layer's inflated cost.
Pose2D select_frontier_subgoal(const CostLayer& layer, const Pose2D& start, const Pose2D& goal, double ceiling);

struct RefineOptions {
  bool shortcut = true;
  double ceiling = 0.5;
};

/// Shortcut, prune collinear points, resample. Costs are measured on the
/// layer (inflated when the layer has a footprint).
PlannedPath refine_path(const PlannedPath& path, const CostLayer& layer, const TrrtConfig& config,
                        const RefineOptions& options, Rng& rng);
PlannedPath refine_path(const PlannedPath& path, const costmap::OccupancyGrid& grid, const TrrtConfig& config);

}  // namespace catnav::planner
