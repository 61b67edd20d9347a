#include <cmath>
#include <functional>

#include "catnav/planner/trrt.hpp"

namespace catnav::planner {

namespace {

using costmap::CellIndex;
using costmap::CellState;

Pose2D walk_ray(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                const std::function<bool(CellIndex)>& safe) {
  const auto cells = costmap::bresenham_trace(grid.world_to_cell(start.x, start.y), grid.world_to_cell(goal.x, goal.y));
  std::size_t last_safe = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (!grid.contains(cells[i]) || grid.at(cells[i]).state == CellState::kUnknown || !safe(cells[i])) break;
    last_safe = i;
  }
  if (last_safe + 1 == cells.size()) return goal;
  if (last_safe == 0) return start;
  const auto center = grid.cell_center(cells[last_safe]);
  return make_pose(center[0], center[1], std::atan2(goal.y - start.y, goal.x - start.x));
}

}  // namespace

Pose2D select_frontier_subgoal(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                               double ceiling) {
  return walk_ray(grid, start, goal, [&](CellIndex c) {
    const auto& cell = grid.at(c);
    return cell.state == CellState::kFree || cell.risk <= ceiling;
  });
}

Pose2D select_frontier_subgoal(const CostLayer& layer, const Pose2D& start, const Pose2D& goal, double ceiling) {
  return walk_ray(layer.grid(), start, goal, [&](CellIndex c) { return layer.inflated(c) <= ceiling; });
}

}  // namespace catnav::planner
