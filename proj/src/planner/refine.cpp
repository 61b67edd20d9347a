#include <cmath>

#include "catnav/planner/trrt.hpp"

namespace catnav::planner {

namespace {

std::vector<Pose2D> prune(const std::vector<Pose2D>& in) {
  std::vector<Pose2D> out;
  for (const auto& p : in) {
    if (!out.empty() && std::hypot(p.x - out.back().x, p.y - out.back().y) < 1e-9) continue;
    out.push_back(p);
  }
  if (out.size() < 3) return out;
  std::vector<Pose2D> kept{out.front()};
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    const Pose2D& a = kept.back();
    const Pose2D& b = out[i];
    const Pose2D& c = out[i + 1];
    const double ux = b.x - a.x, uy = b.y - a.y;
    const double vx = c.x - b.x, vy = c.y - b.y;
    const double cross = ux * vy - uy * vx;
    const double dot = ux * vx + uy * vy;
    if (std::abs(cross) < 1e-9 && dot > 0.0) continue;
    kept.push_back(b);
  }
  kept.push_back(out.back());
  return kept;
}

std::vector<Pose2D> resample(const std::vector<Pose2D>& in, double spacing) {
  if (in.size() < 2) return in;
  std::vector<Pose2D> out{in.front()};
  for (std::size_t i = 1; i < in.size(); ++i) {
    const Pose2D& a = in[i - 1];
    const Pose2D& b = in[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
    for (int k = 1; k < pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), 0.0});
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace

PlannedPath refine_path(const PlannedPath& path, const CostLayer& layer, const TrrtConfig& config,
                        const RefineOptions& options, Rng& rng) {
  std::vector<Pose2D> pts = path.waypoints;
  const bool inflate = layer.footprint_radius() > 0.0;

  if (options.shortcut && pts.size() > 2) {
    const double budget = path_cost(pts, layer, inflate) * (1.0 + config.shortcut_cost_slack) + 1e-12;
    for (int attempt = 0; attempt < config.shortcut_attempts && pts.size() > 2; ++attempt) {
      const std::size_t n = pts.size();
      const std::size_t i = rng.below(n - 2);
      const std::size_t j = i + 2 + rng.below(n - i - 2);
      if (!layer.segment_feasible(pts[i].x, pts[i].y, pts[j].x, pts[j].y, options.ceiling)) continue;
      std::vector<Pose2D> candidate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      candidate.insert(candidate.end(), pts.begin() + static_cast<std::ptrdiff_t>(j), pts.end());
      if (path_cost(candidate, layer, inflate) <= budget) pts = std::move(candidate);
    }
  }

  PlannedPath out = path;
  out.waypoints = resample(prune(pts), config.resample_spacing);
  if (!path.waypoints.empty()) out.waypoints.front() = path.waypoints.front();
  assign_headings(out.waypoints);
  out.total_length = polyline_length(out.waypoints);
  out.accumulated_cost = path_cost(out.waypoints, layer, false);
  return out;
}

PlannedPath refine_path(const PlannedPath& path, const costmap::OccupancyGrid& grid, const TrrtConfig& config) {
  const CostLayer layer(grid, config.unknown_cost, config.footprint_radius);
  Rng rng(mix_seed(config.rng_seed, 101));
  return refine_path(path, layer, config, RefineOptions{true, config.cost_ceiling}, rng);
}

}  // namespace catnav::planner
