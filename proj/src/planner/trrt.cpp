#include "catnav/planner/trrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace catnav::planner {

namespace {

struct Node {
  double x;
  double y;
  double cost;
  int parent;
};

// Uniform bucket grid over the planning window for exact nearest-node queries.
class NodeIndex {
 public:
  NodeIndex(const costmap::OccupancyGrid& grid, double bucket)
      : origin_(grid.origin()),
        cos_(std::cos(grid.origin().heading)),
        sin_(std::sin(grid.origin().heading)),
        bucket_(bucket) {
    nx_ = std::max(1, static_cast<int>(std::ceil(grid.width() * grid.resolution() / bucket_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(grid.height() * grid.resolution() / bucket_)));
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  }

  void insert(const std::vector<Node>& nodes, int id) {
    const auto [bx, by] = bucket_of(nodes[id].x, nodes[id].y);
    buckets_[static_cast<std::size_t>(by) * nx_ + bx].push_back(id);
  }

  // Smallest (distance, id) pair; ties go to the earlier node.
  int nearest(const std::vector<Node>& nodes, double x, double y) const {
    const auto [qx, qy] = bucket_of(x, y);
    int best = -1;
    double best_sq = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int by = qy - ring; by <= qy + ring; ++by) {
        if (by < 0 || by >= ny_) continue;
        const bool edge_row = by == qy - ring || by == qy + ring;
        for (int bx = qx - ring; bx <= qx + ring; bx += (edge_row ? 1 : 2 * std::max(ring, 1))) {
          if (bx < 0 || bx >= nx_) continue;
          for (int id : buckets_[static_cast<std::size_t>(by) * nx_ + bx]) {
            const double dx = nodes[id].x - x;
            const double dy = nodes[id].y - y;
            const double sq = dx * dx + dy * dy;
            if (sq < best_sq || (sq == best_sq && id < best)) {
              best_sq = sq;
              best = id;
            }
          }
        }
      }
      if (best >= 0 && std::sqrt(best_sq) < ring * bucket_) break;
    }
    return best;
  }

 private:
  std::pair<int, int> bucket_of(double x, double y) const {
    const double dx = x - origin_.x;
    const double dy = y - origin_.y;
    const double lx = cos_ * dx + sin_ * dy;
    const double ly = -sin_ * dx + cos_ * dy;
    const int bx = std::clamp(static_cast<int>(std::floor(lx / bucket_)), 0, nx_ - 1);
    const int by = std::clamp(static_cast<int>(std::floor(ly / bucket_)), 0, ny_ - 1);
    return {bx, by};
  }

  Pose2D origin_;
  double cos_;
  double sin_;
  double bucket_;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

PlannedPath build_path(const std::vector<Node>& nodes, int tip, const Pose2D& start, const Pose2D& goal,
                       const CostLayer& layer) {
  std::vector<Pose2D> reversed{goal};
  for (int id = tip; id > 0; id = nodes[id].parent) reversed.push_back({nodes[id].x, nodes[id].y, 0.0});
  reversed.push_back(start);
  PlannedPath path;
  path.waypoints.assign(reversed.rbegin(), reversed.rend());
  assign_headings(path.waypoints);
  path.total_length = polyline_length(path.waypoints);
  path.accumulated_cost = path_cost(path.waypoints, layer, false);
  return path;
}

}  // namespace

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kOk: return "ok";
    case PlanStatus::kNoPath: return "no-path";
    case PlanStatus::kStartInfeasible: return "start-infeasible";
    case PlanStatus::kGoalInfeasible: return "goal-infeasible";
  }
  return "no-path";
}

PlanResult trrt_plan(const CostLayer& layer, const Pose2D& start, const Pose2D& goal, const TrrtConfig& config) {
  validate(config);
  PlanResult result;
  const double ceiling = config.cost_ceiling;
  const double start_cost = layer.inflated_at(start.x, start.y);
  if (!(start_cost <= ceiling)) {
    result.status = PlanStatus::kStartInfeasible;
    return result;
  }
  if (!(layer.inflated_at(goal.x, goal.y) <= ceiling)) {
    result.status = PlanStatus::kGoalInfeasible;
    return result;
  }

  const auto& grid = layer.grid();
  std::vector<Node> nodes{{start.x, start.y, start_cost, -1}};
  NodeIndex index(grid, std::max(config.step_size, 0.5));
  index.insert(nodes, 0);

  auto try_goal = [&](int id) {
    const Node& n = nodes[id];
    return std::hypot(goal.x - n.x, goal.y - n.y) <= config.step_size &&
           layer.segment_feasible(n.x, n.y, goal.x, goal.y, ceiling);
  };

  if (try_goal(0)) {
    result.status = PlanStatus::kOk;
    result.path = build_path(nodes, 0, start, goal, layer);
    result.tree_size = 1;
    return result;
  }

  Rng rng(config.rng_seed);
  TransitionTest transition(config);
  const double span_x = grid.width() * grid.resolution();
  const double span_y = grid.height() * grid.resolution();
  const double c = std::cos(grid.origin().heading);
  const double s = std::sin(grid.origin().heading);

  for (int it = 0; it < config.max_iterations; ++it) {
    result.iterations = it + 1;
    double tx = goal.x;
    double ty = goal.y;
    if (rng.uniform() >= config.goal_bias) {
      const double lx = rng.uniform() * span_x;
      const double ly = rng.uniform() * span_y;
      tx = grid.origin().x + c * lx - s * ly;
      ty = grid.origin().y + s * lx + c * ly;
    }
    const int near = index.nearest(nodes, tx, ty);
    const Node& from = nodes[near];
    const double d = std::hypot(tx - from.x, ty - from.y);
    if (d < 1e-9) continue;
    const double f = std::min(1.0, config.step_size / d);
    const double nx = from.x + f * (tx - from.x);
    const double ny = from.y + f * (ty - from.y);
    if (!layer.segment_feasible(from.x, from.y, nx, ny, ceiling)) continue;
    const double cost = layer.inflated_at(nx, ny);
    if (!transition.accept(from.cost, cost, rng)) continue;

    nodes.push_back({nx, ny, cost, near});
    const int id = static_cast<int>(nodes.size()) - 1;
    index.insert(nodes, id);
    if (try_goal(id)) {
      result.status = PlanStatus::kOk;
      result.path = build_path(nodes, id, start, goal, layer);
      result.tree_size = nodes.size();
      return result;
    }
  }
  result.status = PlanStatus::kNoPath;
  result.tree_size = nodes.size();
  return result;
}

PlanResult trrt_plan(const costmap::OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                     const TrrtConfig& config) {
  return trrt_plan(CostLayer(grid, config.unknown_cost, config.footprint_radius), start, goal, config);
}

double path_cost(const std::vector<Pose2D>& w, const CostLayer& layer, bool use_inflation) {
  double total = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i)
    total += layer.segment_cost(w[i - 1].x, w[i - 1].y, w[i].x, w[i].y, use_inflation);
  return total;
}

double path_cost(const PlannedPath& path, const costmap::OccupancyGrid& grid, double unknown_cost) {
  return path_cost(path.waypoints, CostLayer(grid, unknown_cost, 0.0), false);
}

}  // namespace catnav::planner
