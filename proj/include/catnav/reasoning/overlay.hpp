#pragma once

#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/planner/types.hpp"

namespace catnav::reasoning {

struct LegendEntry {
  planner::ProposalLabel label = planner::ProposalLabel::kCenter;
  Rgb color{};
  bool off_view = false;

  friend bool operator==(const LegendEntry&, const LegendEntry&) = default;
};

struct OverlayImage {
  Image<Rgb> pixels;
  std::vector<LegendEntry> legend;
};

inline constexpr int kLineWidth = 3;

/// Draws every proposal onto a copy of `observation`. Waypoints are ground
/// points in the world frame; `robot_pose` maps them into the robot frame
/// (pass the identity pose for robot-frame waypoints). Segments are clipped
/// at a near plane and at the image border.
OverlayImage render_overlay(const Image<Rgb>& observation, const planner::ProposalSet& proposals,
                            const CameraModel& camera, const Pose2D& robot_pose);

}  // namespace catnav::reasoning
