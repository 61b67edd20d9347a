#include "catnav/costmap/point_cloud.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "catnav/core/error.hpp"

namespace catnav::costmap {

namespace {

struct Axes {
  Vec3 right, down, forward;
};

Axes camera_axes(const CameraModel& camera) {
  const double c = std::cos(camera.pitch);
  const double s = std::sin(camera.pitch);
  return {{0.0, -1.0, 0.0}, {-s, 0.0, -c}, {c, 0.0, -s}};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

}  // namespace

Vec3 pixel_to_camera(const CameraModel& camera, double u, double v, double depth) {
  return {(u - camera.cx) / camera.fx * depth, (v - camera.cy) / camera.fy * depth, depth};
}

std::optional<std::array<double, 2>> camera_to_pixel(const CameraModel& camera, const Vec3& p) {
  if (!(p.z > 0.0)) return std::nullopt;
  return std::array<double, 2>{camera.fx * p.x / p.z + camera.cx, camera.fy * p.y / p.z + camera.cy};
}

Vec3 camera_to_robot(const CameraModel& camera, const Vec3& p) {
  const Axes a = camera_axes(camera);
  return {p.x * a.right.x + p.y * a.down.x + p.z * a.forward.x,
          p.x * a.right.y + p.y * a.down.y + p.z * a.forward.y,
          camera.mount_height + p.x * a.right.z + p.y * a.down.z + p.z * a.forward.z};
}

Vec3 robot_to_camera(const CameraModel& camera, const Vec3& p) {
  const Axes a = camera_axes(camera);
  const Vec3 q{p.x, p.y, p.z - camera.mount_height};
  return {dot(q, a.right), dot(q, a.down), dot(q, a.forward)};
}

std::vector<RiskPoint> backproject_risk_points(const PixelCostmap& costmap, const Image<double>& depth,
                                               const CameraModel& camera, int stride) {
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (depth.width() != costmap.width() || depth.height() != costmap.height())
    throw Error(ErrorCode::kSizeMismatch, "depth and costmap sizes differ");
  std::vector<RiskPoint> points;
  for (int v = 0; v < depth.height(); v += stride) {
    for (int u = 0; u < depth.width(); u += stride) {
      const double d = depth.at(u, v);
      if (!std::isfinite(d) || d <= 0.0) continue;
      const Vec3 p = camera_to_robot(camera, pixel_to_camera(camera, u, v, d));
      points.push_back({p.x, p.y, p.z, costmap.values.at(u, v)});
    }
  }
  return points;
}

std::vector<RiskPoint> voxel_downsample(const std::vector<RiskPoint>& points, double voxel) {
  if (!(voxel > 0.0)) throw Error(ErrorCode::kInvalidArgument, "voxel size must be positive");
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<Key, std::size_t, KeyHash> slot;
  std::vector<RiskPoint> out;
  for (const auto& p : points) {
    const Key key{static_cast<std::int64_t>(std::floor(p.x / voxel)), static_cast<std::int64_t>(std::floor(p.y / voxel)),
                  static_cast<std::int64_t>(std::floor(p.z / voxel))};
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      out.push_back(p);
    } else if (p.risk > out[it->second].risk) {
      out[it->second] = p;
    }
  }
  return out;
}

std::vector<RiskPoint> robot_to_world(const std::vector<RiskPoint>& points, const Pose2D& pose) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  std::vector<RiskPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y, p.z, p.risk});
  return out;
}

}  // namespace catnav::costmap
