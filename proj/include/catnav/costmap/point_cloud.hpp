#pragma once

#include <array>
#include <optional>
#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/core/types.hpp"
#include "catnav/costmap/pixel_costmap.hpp"

namespace catnav::costmap {

inline constexpr int kDefaultStride = 4;
inline constexpr double kDefaultVoxel = 0.1;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct RiskPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double risk = 0.0;
};

// Camera optical frame: x right, y down, z forward.
// Robot frame: x forward, y left, z up; camera sits at (0, 0, mount_height).

/// d * K^-1 (u, v, 1) with d the depth along the optical axis.
Vec3 pixel_to_camera(const CameraModel& camera, double u, double v, double depth);
/// Perspective projection; nullopt when the point is not in front of the camera.
std::optional<std::array<double, 2>> camera_to_pixel(const CameraModel& camera, const Vec3& p);

Vec3 camera_to_robot(const CameraModel& camera, const Vec3& p);
Vec3 robot_to_camera(const CameraModel& camera, const Vec3& p);

/// Strided back-projection of every sampled pixel with finite positive depth.
/// Zero-risk pixels are emitted too; they mark observed free ground.
std::vector<RiskPoint> backproject_risk_points(const PixelCostmap& costmap, const Image<double>& depth,
                                               const CameraModel& camera, int stride = kDefaultStride);

/// Keeps the highest-risk point of every occupied voxel (first one on ties),
/// in order of first appearance.
std::vector<RiskPoint> voxel_downsample(const std::vector<RiskPoint>& points, double voxel = kDefaultVoxel);

/// Rigid transform of robot-frame points into the world frame at `pose`.
std::vector<RiskPoint> robot_to_world(const std::vector<RiskPoint>& points, const Pose2D& pose);

}  // namespace catnav::costmap
