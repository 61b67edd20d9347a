#include "catnav/sim/robot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catnav/core/error.hpp"

namespace catnav::sim {

std::array<double, 2> project_onto_path(const std::vector<Pose2D>& path, double x, double y) {
  if (path.empty()) return {0.0, std::numeric_limits<double>::infinity()};
  double best_d = std::hypot(x - path[0].x, y - path[0].y), best_s = 0.0, s = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dx = path[i + 1].x - path[i].x, dy = path[i + 1].y - path[i].y;
    const double len = std::hypot(dx, dy);
    if (len > 0.0) {
      const double t = std::clamp(((x - path[i].x) * dx + (y - path[i].y) * dy) / (len * len), 0.0, 1.0);
      const double d = std::hypot(x - (path[i].x + t * dx), y - (path[i].y + t * dy));
      if (d < best_d) {
        best_d = d;
        best_s = s + t * len;
      }
    }
    s += len;
  }
  return {best_s, best_d};
}

namespace {

std::array<double, 2> point_at(const std::vector<Pose2D>& path, double s) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dx = path[i + 1].x - path[i].x, dy = path[i + 1].y - path[i].y;
    const double len = std::hypot(dx, dy);
    if (s <= len && len > 0.0) return {path[i].x + dx * s / len, path[i].y + dy * s / len};
    s -= len;
  }
  return {path.back().x, path.back().y};
}

}  // namespace

RobotState step_robot(const RobotState& state, const std::vector<Pose2D>& path, double dt,
                      const FollowerConfig& config) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  RobotState next = state;
  next.speed = 0.0;
  next.yaw_rate = 0.0;
  if (path.empty()) return next;

  const Pose2D& p = state.pose;
  const double to_end = std::hypot(path.back().x - p.x, path.back().y - p.y);
  if (to_end < config.stop_tolerance) return next;

  const auto [s, cross] = project_onto_path(path, p.x, p.y);
  (void)cross;
  const auto target = point_at(path, s + config.lookahead);
  const double c = std::cos(p.heading), sn = std::sin(p.heading);
  const double gx = target[0] - p.x, gy = target[1] - p.y;
  const double lx = c * gx + sn * gy, ly = -sn * gx + c * gy;
  const double l2 = lx * lx + ly * ly;
  if (l2 < 1e-18) return next;
  const double alpha = std::atan2(ly, lx);

  double v = 0.0, w = 0.0;
  if (std::abs(alpha) > config.turn_in_place) {
    w = std::copysign(std::min(config.max_yaw_rate, std::abs(alpha) / dt), alpha);
  } else {
    const double kappa = 2.0 * ly / l2;
    v = std::min(config.max_speed, to_end / dt);
    w = v * kappa;
    if (std::abs(w) > config.max_yaw_rate) {
      v = config.max_yaw_rate / std::abs(kappa);
      w = std::copysign(config.max_yaw_rate, kappa);
    }
  }

  Pose2D q = p;
  if (std::abs(w) < 1e-12) {
    q.x += v * dt * c;
    q.y += v * dt * sn;
  } else {
    const double r = v / w;
    const double h1 = p.heading + w * dt;
    q.x += r * (std::sin(h1) - sn);
    q.y -= r * (std::cos(h1) - c);
    q.heading = wrap_angle(h1);
  }
  next.pose = q;
  next.speed = v;
  next.yaw_rate = w;
  return next;
}

bool disc_hits_terrain(const Scene& scene, double x, double y, double radius, double clearance) {
  const auto lo = scene.cell_of(x - radius, y - radius);
  const auto hi = scene.cell_of(x + radius, y + radius);
  for (int iy = lo[1]; iy <= hi[1]; ++iy) {
    for (int ix = lo[0]; ix <= hi[0]; ++ix) {
      if (!scene.contains_cell(ix, iy) || scene.height_at_cell(ix, iy) <= clearance) continue;
      const double x0 = scene.x_min + ix * scene.resolution, y0 = scene.y_min + iy * scene.resolution;
      const double nx = std::clamp(x, x0, x0 + scene.resolution), ny = std::clamp(y, y0, y0 + scene.resolution);
      if (std::hypot(x - nx, y - ny) < radius) return true;
    }
  }
  return false;
}

}  // namespace catnav::sim
