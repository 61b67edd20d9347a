#include "catnav/reasoning/mock_select.hpp"

#include "catnav/planner/trrt.hpp"

namespace catnav::reasoning {

SelectionResult mock_select(const planner::ProposalSet& proposals, const costmap::OccupancyGrid& grid,
                            const BehaviorSpec& behavior, const SceneTruth& truth, const MockSelectConfig& config) {
  SelectionResult result;
  result.frame_id = proposals.frame_id;
  result.reason = std::string(kMockReason);
  if (proposals.empty()) return result;

  const planner::CostLayer layer(grid, config.unknown_cost, 0.0);
  const planner::PlannedPath* best = nullptr;
  double best_score = 0.0;
  for (const auto& p : proposals.proposals) {
    const double score = planner::path_cost(p.waypoints, layer, false) +
                         config.lambda_b * violation_length(p.waypoints, behavior.rule, truth);
    if (!best || score < best_score ||
        (score == best_score && planner::precedence(p.label) < planner::precedence(best->label))) {
      best = &p;
      best_score = score;
    }
  }
  result.choice = best->label;
  return result;
}

}  // namespace catnav::reasoning
