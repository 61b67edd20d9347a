#pragma once

#include <span>

#include "catnav/providers/observation.hpp"
#include "catnav/sim/scene.hpp"

namespace catnav::sim {

inline constexpr double kMaxRange = 12.0;  // m along the ray

/// Raycasts one frame. Depth is measured along the optical axis, matching
/// the back-projection convention; rays that hit nothing within kMaxRange
/// are sky (class kSkyClass, depth +inf). RGB pixels are exact palette colors.
providers::Observation render_observation(const Scene& scene, std::span<const AgentPose> agents, const Pose2D& pose,
                                          const CameraModel& camera, int frame_id = 0);

struct RayHit {
  double range = 0.0;  // distance along the unit ray
  int class_index = providers::kSkyClass;
};

/// Nearest hit of a world-frame ray starting at `origin` with unit `dir`.
RayHit cast_ray(const Scene& scene, std::span<const AgentPose> agents, const std::array<double, 3>& origin,
                const std::array<double, 3>& dir, double max_range = kMaxRange);

}  // namespace catnav::sim
