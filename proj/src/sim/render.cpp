#include "catnav/sim/render.hpp"

#include <cmath>
#include <limits>

#include "catnav/costmap/point_cloud.hpp"

namespace catnav::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFaceNudge = 1e-7;

std::optional<double> agent_hit(const Agent& agent, const AgentPose& at, const std::array<double, 3>& o,
                                const std::array<double, 3>& d) {
  const double a = d[0] * d[0] + d[1] * d[1];
  if (a < 1e-18) return std::nullopt;
  const double fx = o[0] - at.x, fy = o[1] - at.y;
  const double b = 2.0 * (fx * d[0] + fy * d[1]);
  const double c = fx * fx + fy * fy - agent.radius * agent.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  if (t < 0.0) return std::nullopt;
  const double z = o[2] + t * d[2];
  if (z < 0.0 || z > agent.height) return std::nullopt;
  return t + kFaceNudge;
}

}  // namespace

RayHit cast_ray(const Scene& scene, std::span<const AgentPose> agents, const std::array<double, 3>& o,
                const std::array<double, 3>& d, double max_range) {
  RayHit best{kInf, providers::kSkyClass};
  for (const auto& ap : agents) {
    const auto& agent = scene.agents[ap.agent];
    if (auto t = agent_hit(agent, ap, o, d); t && *t < best.range && *t <= max_range)
      best = {*t, scene.class_index(agent.label)};
  }

  // Amanatides-Woo walk over scene cells in the ground plane.
  const double res = scene.resolution;
  const double gx = (o[0] - scene.x_min) / res, gy = (o[1] - scene.y_min) / res;
  int ix = static_cast<int>(std::floor(gx)), iy = static_cast<int>(std::floor(gy));
  const int step_x = d[0] > 0 ? 1 : -1, step_y = d[1] > 0 ? 1 : -1;
  const double inv_x = std::abs(d[0]) > 1e-15 ? res / std::abs(d[0]) : kInf;
  const double inv_y = std::abs(d[1]) > 1e-15 ? res / std::abs(d[1]) : kInf;
  double next_x = inv_x == kInf ? kInf : (d[0] > 0 ? (ix + 1 - gx) : (gx - ix)) * inv_x;
  double next_y = inv_y == kInf ? kInf : (d[1] > 0 ? (iy + 1 - gy) : (gy - iy)) * inv_y;
  double t0 = 0.0;
  const double limit = std::min(max_range, best.range);
  while (t0 <= limit && scene.contains_cell(ix, iy)) {
    const double t1 = std::min(next_x, next_y);
    const int cls = scene.class_at_cell(ix, iy);
    const double h = scene.classes[cls].height;
    std::optional<double> hit;
    if (h > 0.0) {
      if (o[2] + t0 * d[2] <= h) {
        hit = t0 == 0.0 ? 0.0 : t0 + kFaceNudge;
      } else if (d[2] < 0.0) {
        const double tz = (h - o[2]) / d[2];
        if (tz <= t1) hit = tz;
      }
    } else if (d[2] < 0.0) {
      const double tg = -o[2] / d[2];
      if (tg >= t0 && tg <= t1) hit = tg;
    }
    if (hit) {
      if (*hit <= limit) best = {*hit, cls};
      break;
    }
    t0 = t1;
    if (next_x < next_y) {
      ix += step_x;
      next_x += inv_x;
    } else {
      iy += step_y;
      next_y += inv_y;
    }
  }
  return best;
}

providers::Observation render_observation(const Scene& scene, std::span<const AgentPose> agents, const Pose2D& pose,
                                          const CameraModel& camera, int frame_id) {
  validate(camera);
  providers::Observation obs;
  obs.frame_id = frame_id;
  obs.class_names = scene.class_names();
  obs.rgb = Image<Rgb>(camera.width, camera.height, providers::kSkyColor);
  obs.depth = Image<double>(camera.width, camera.height, kInf);
  obs.truth_class = Image<int>(camera.width, camera.height, providers::kSkyClass);

  const double c = std::cos(pose.heading), s = std::sin(pose.heading);
  const std::array<double, 3> origin{pose.x, pose.y, camera.mount_height};
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const costmap::Vec3 ray = costmap::pixel_to_camera(camera, u, v, 1.0);
      const double norm = std::sqrt(ray.x * ray.x + ray.y * ray.y + 1.0);
      const costmap::Vec3 r = costmap::camera_to_robot(camera, ray);
      const double rx = r.x, ry = r.y, rz = r.z - camera.mount_height;
      const std::array<double, 3> dir{(c * rx - s * ry) / norm, (s * rx + c * ry) / norm, rz / norm};
      const RayHit hit = cast_ray(scene, agents, origin, dir);
      if (hit.class_index == providers::kSkyClass) continue;
      obs.truth_class.at(u, v) = hit.class_index;
      obs.depth.at(u, v) = hit.range / norm;
      obs.rgb.at(u, v) = scene.classes[hit.class_index].color;
    }
  }
  return obs;
}

}  // namespace catnav::sim
