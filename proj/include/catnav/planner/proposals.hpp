#pragma once

#include "catnav/core/serialize.hpp"
#include "catnav/planner/trrt.hpp"

namespace catnav::planner {

ProposalSet generate_proposals(const CostLayer& layer, const Pose2D& start, const Pose2D& goal,
                               const TrrtConfig& config, int frame_id = 0);
ProposalSet generate_proposals(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                               const TrrtConfig& config, int frame_id = 0);

Json to_json(const PlannedPath& path);
Json to_json(const ProposalSet& set);
PlannedPath planned_path_from_json(const Json& j);
ProposalSet proposal_set_from_json(const Json& j);

}  // namespace catnav::planner
