#pragma once

#include "catnav/costmap/occupancy_grid.hpp"
#include "catnav/reasoning/behavior.hpp"
#include "catnav/reasoning/selection.hpp"

namespace catnav::reasoning {

struct MockSelectConfig {
  double lambda_b = 2.0;
  double unknown_cost = 0.2;
};

inline constexpr std::string_view kMockReason = "lowest combined cost";

/// Deterministic selector: minimizes path cost plus lambda_b times behavior
/// violation length; ties go to center, left, right, risky in that order.
SelectionResult mock_select(const planner::ProposalSet& proposals, const costmap::OccupancyGrid& grid,
                            const BehaviorSpec& behavior, const SceneTruth& truth, const MockSelectConfig& config = {});

}  // namespace catnav::reasoning
