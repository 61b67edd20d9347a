#include "catnav/planner/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace catnav::planner {

namespace {

double point_segment_distance(double px, double py, const Pose2D& a, const Pose2D& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len_sq = vx * vx + vy * vy;
  double t = len_sq > 0.0 ? ((px - a.x) * vx + (py - a.y) * vy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * vx), py - (a.y + t * vy));
}

bool within(const PlannedPath& p, const PlannedPath& q, double tol) {
  for (const auto& w : p.waypoints) {
    double best = q.waypoints.size() == 1 ? std::hypot(w.x - q.waypoints[0].x, w.y - q.waypoints[0].y)
                                          : std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < q.waypoints.size() && best > tol; ++i)
      best = std::min(best, point_segment_distance(w.x, w.y, q.waypoints[i - 1], q.waypoints[i]));
    if (best > tol) return false;
  }
  return true;
}

void label_path(PlannedPath& path, ProposalLabel label) {
  path.label = label;
  path.color = palette_color(label);
}

// Displaces the center by a ramped lateral offset; side = +1 left, -1 right.
std::optional<PlannedPath> offset_proposal(const PlannedPath& center, const CostLayer& layer,
                                           const TrrtConfig& config, double side) {
  const auto& w = center.waypoints;
  const std::size_t n = w.size();
  if (n < 2 || config.offset <= 0.0) return std::nullopt;

  std::vector<double> s(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + std::hypot(w[i].x - w[i - 1].x, w[i].y - w[i - 1].y);
  const double total = s.back();

  std::vector<double> nx(n), ny(n), off(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Pose2D& a = w[i == 0 ? 0 : i - 1];
    const Pose2D& b = w[i + 1 == n ? n - 1 : i + 1];
    const double tx = b.x - a.x, ty = b.y - a.y;
    const double len = std::hypot(tx, ty);
    nx[i] = len > 0.0 ? -ty / len * side : 0.0;
    ny[i] = len > 0.0 ? tx / len * side : 0.0;
    const double ramp = config.offset_ramp > 0.0
                            ? std::min({1.0, s[i] / config.offset_ramp, (total - s[i]) / config.offset_ramp})
                            : 1.0;
    off[i] = config.offset * std::max(0.0, ramp);
  }

  auto shrink = [&](std::size_t i) {
    off[i] *= config.offset_shrink;
    if (off[i] < config.min_offset) off[i] = 0.0;
  };
  auto px = [&](std::size_t i) { return w[i].x + off[i] * nx[i]; };
  auto py = [&](std::size_t i) { return w[i].y + off[i] * ny[i]; };

  for (std::size_t i = 0; i < n; ++i) {
    if (off[i] < config.min_offset) off[i] = 0.0;
    while (off[i] > 0.0 && !(layer.inflated_at(px(i), py(i)) <= config.cost_ceiling)) shrink(i);
  }
  bool clean = false;
  for (int pass = 0; pass < 16 && !clean; ++pass) {
    clean = true;
    for (std::size_t i = 1; i < n; ++i) {
      if (layer.segment_feasible(px(i - 1), py(i - 1), px(i), py(i), config.cost_ceiling)) continue;
      clean = false;
      shrink(i - 1);
      shrink(i);
    }
  }
  if (!clean) return std::nullopt;

  PlannedPath path;
  for (std::size_t i = 0; i < n; ++i) path.waypoints.push_back({px(i), py(i), w[i].heading});
  path.waypoints.front() = w.front();
  return path;
}

}  // namespace

ProposalSet generate_proposals(const CostLayer& layer, const Pose2D& start, const Pose2D& goal,
                               const TrrtConfig& config, int frame_id) {
  ProposalSet set;
  set.frame_id = frame_id;

  std::vector<PlannedPath> candidates;
  const PlanResult center_plan = trrt_plan(layer, start, goal, config);
  std::optional<PlannedPath> center;
  if (center_plan.path) {
    Rng rng(mix_seed(config.rng_seed, 1));
    center = refine_path(*center_plan.path, layer, config, {true, config.cost_ceiling}, rng);
    label_path(*center, ProposalLabel::kCenter);
    candidates.push_back(*center);

    for (auto [label, side] : {std::pair{ProposalLabel::kLeft, 1.0}, std::pair{ProposalLabel::kRight, -1.0}}) {
      auto shifted = offset_proposal(*center, layer, config, side);
      if (!shifted) continue;
      Rng unused(0);
      PlannedPath refined = refine_path(*shifted, layer, config, {false, config.cost_ceiling}, unused);
      label_path(refined, label);
      candidates.push_back(std::move(refined));
    }
  }

  TrrtConfig relaxed = config;
  relaxed.cost_ceiling = std::min(1.0, config.cost_ceiling + config.risky_ceiling_increase);
  relaxed.rng_seed = mix_seed(config.rng_seed, 2);
  const PlanResult risky_plan = trrt_plan(layer, start, goal, relaxed);
  if (risky_plan.path) {
    Rng rng(mix_seed(config.rng_seed, 3));
    PlannedPath risky = refine_path(*risky_plan.path, layer, relaxed, {true, relaxed.cost_ceiling}, rng);
    label_path(risky, ProposalLabel::kRisky);
    if (!center || risky.total_length < config.risky_length_ratio * center->total_length)
      candidates.push_back(std::move(risky));
  }

  for (auto& c : candidates) {
    const bool duplicate = std::any_of(set.proposals.begin(), set.proposals.end(), [&](const PlannedPath& kept) {
      return within(c, kept, config.duplicate_tolerance);
    });
    if (!duplicate) set.proposals.push_back(std::move(c));
  }
  if (set.proposals.empty()) {
    set.diagnostic = "no proposals: center " + std::string(to_string(center_plan.status)) + ", risky " +
                     std::string(to_string(risky_plan.status));
  }
  return set;
}

ProposalSet generate_proposals(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                               const TrrtConfig& config, int frame_id) {
  return generate_proposals(CostLayer(grid, config.unknown_cost, config.footprint_radius), start, goal, config,
                            frame_id);
}

}  // namespace catnav::planner
