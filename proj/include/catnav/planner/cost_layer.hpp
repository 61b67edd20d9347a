#pragma once

#include <vector>

#include "catnav/costmap/occupancy_grid.hpp"

namespace catnav::planner {

/// Traversal costs over a grid snapshot. Raw cost is the cell's own value
/// (free 0, risk r, unknown `unknown_cost`); inflated cost is the maximum raw
/// cost over the footprint disc around the cell.
class CostLayer {
 public:
  CostLayer(costmap::OccupancyGrid grid, double unknown_cost, double footprint_radius);

  const costmap::OccupancyGrid& grid() const noexcept { return grid_; }
  double unknown_cost() const noexcept { return unknown_cost_; }
  double footprint_radius() const noexcept { return footprint_radius_; }

  /// Cells outside the grid count as unknown.
  double raw(costmap::CellIndex c) const;
  /// Cells outside the grid are infeasible (+inf).
  double inflated(costmap::CellIndex c) const;

  double raw_at(double x, double y) const { return raw(grid_.world_to_cell(x, y)); }
  double inflated_at(double x, double y) const { return inflated(grid_.world_to_cell(x, y)); }

  /// Checks the inflated cost at samples no further apart than a quarter cell.
  bool segment_feasible(double ax, double ay, double bx, double by, double ceiling) const;

  /// Exact line integral of cost along a segment, cell by cell. With
  /// `use_inflation` the inflated cost is integrated (outside cells still
  /// count as unknown).
  double segment_cost(double ax, double ay, double bx, double by, bool use_inflation) const;

 private:
  costmap::OccupancyGrid grid_;
  double unknown_cost_;
  double footprint_radius_;
  std::vector<double> raw_;
  std::vector<double> inflated_;
};

}  // namespace catnav::planner
