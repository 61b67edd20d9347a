#include "catnav/reasoning/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "catnav/costmap/point_cloud.hpp"

namespace catnav::reasoning {

namespace {

constexpr double kNearPlane = 0.05;

using costmap::Vec3;

// Liang-Barsky clip of p0->p1 to [lo_x, hi_x] x [lo_y, hi_y].
bool clip(double& x0, double& y0, double& x1, double& y1, double lo_x, double lo_y, double hi_x, double hi_y) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = x1 - x0, dy = y1 - y0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {x0 - lo_x, hi_x - x0, y0 - lo_y, hi_y - y0};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  const double ax = x0 + t0 * dx, ay = y0 + t0 * dy;
  x1 = x0 + t1 * dx;
  y1 = y0 + t1 * dy;
  x0 = ax;
  y0 = ay;
  return true;
}

int stamp(Image<Rgb>& img, double u, double v, const Rgb& color) {
  const int cu = static_cast<int>(std::lround(u));
  const int cv = static_cast<int>(std::lround(v));
  const int half = kLineWidth / 2;
  int count = 0;
  for (int dv = -half; dv <= half; ++dv)
    for (int du = -half; du <= half; ++du)
      if (img.contains(cu + du, cv + dv)) {
        img.at(cu + du, cv + dv) = color;
        ++count;
      }
  return count;
}

int draw_segment(Image<Rgb>& img, const CameraModel& camera, Vec3 a, Vec3 b, const Rgb& color) {
  if (a.z < kNearPlane && b.z < kNearPlane) return 0;
  auto cut = [](const Vec3& inside, const Vec3& outside) {
    const double t = (kNearPlane - inside.z) / (outside.z - inside.z);
    return Vec3{inside.x + t * (outside.x - inside.x), inside.y + t * (outside.y - inside.y), kNearPlane};
  };
  if (a.z < kNearPlane) a = cut(b, a);
  if (b.z < kNearPlane) b = cut(a, b);
  const auto pa = costmap::camera_to_pixel(camera, a);
  const auto pb = costmap::camera_to_pixel(camera, b);
  if (!pa || !pb) return 0;
  double x0 = (*pa)[0], y0 = (*pa)[1], x1 = (*pb)[0], y1 = (*pb)[1];
  if (!clip(x0, y0, x1, y1, -1.0, -1.0, img.width(), img.height())) return 0;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
  int count = 0;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    count += stamp(img, x0 + t * (x1 - x0), y0 + t * (y1 - y0), color);
  }
  return count;
}

}  // namespace

OverlayImage render_overlay(const Image<Rgb>& observation, const planner::ProposalSet& proposals,
                            const CameraModel& camera, const Pose2D& robot_pose) {
  OverlayImage out{observation, {}};
  const double c = std::cos(robot_pose.heading);
  const double s = std::sin(robot_pose.heading);
  auto to_camera = [&](const Pose2D& w) {
    const double dx = w.x - robot_pose.x, dy = w.y - robot_pose.y;
    return costmap::robot_to_camera(camera, {c * dx + s * dy, -s * dx + c * dy, 0.0});
  };

  out.legend.resize(proposals.proposals.size());
  // Lowest precedence first so the center path ends up on top.
  for (std::size_t k = proposals.proposals.size(); k-- > 0;) {
    const auto& path = proposals.proposals[k];
    int drawn = 0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
      drawn += draw_segment(out.pixels, camera, to_camera(path.waypoints[i - 1]), to_camera(path.waypoints[i]),
                            path.color);
    out.legend[k] = LegendEntry{path.label, path.color, drawn == 0};
  }
  return out;
}

}  // namespace catnav::reasoning
