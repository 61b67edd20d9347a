#pragma once

#include <vector>

#include "catnav/core/types.hpp"
#include "catnav/sim/scene.hpp"

namespace catnav::sim {

struct FollowerConfig {
  double lookahead = 0.6;
  double max_speed = 0.75;
  double max_yaw_rate = 1.5;     // rad/s
  double turn_in_place = 1.0;    // rad; larger heading errors rotate without advancing
  double stop_tolerance = 0.05;  // m to the path end
};

struct RobotState {
  Pose2D pose;
  double speed = 0.0;
  double yaw_rate = 0.0;
};

/// Pure pursuit on a unicycle. An empty path commands zero velocity; the
/// robot slows so that it stops on the last waypoint.
RobotState step_robot(const RobotState& state, const std::vector<Pose2D>& path, double dt,
                      const FollowerConfig& config = {});

/// Closest point on the polyline: (arc length, distance).
std::array<double, 2> project_onto_path(const std::vector<Pose2D>& path, double x, double y);

/// True when a disc overlaps a scene cell taller than `clearance`.
bool disc_hits_terrain(const Scene& scene, double x, double y, double radius, double clearance);

}  // namespace catnav::sim
