#include "catnav/sim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"
#include "catnav/costmap/point_cloud.hpp"

namespace catnav::sim {

void validate(const PipelineConfig& c) {
  cache::validate(c.cache);
  planner::validate(c.planner);
  validate(c.camera);
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
  };
  positive(c.tick_rate, "tick_rate");
  positive(c.timeout, "timeout");
  positive(c.goal_threshold, "goal_threshold");
  positive(c.voxel, "voxel");
  positive(c.window, "window");
  positive(c.follower.lookahead, "lookahead");
  positive(c.follower.max_speed, "max_speed");
  if (c.selection_delay < 0.0 || c.planning_margin < 0.0 || c.safety_margin < 0.0 || c.gps_sigma < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "negative delay, margin or sigma");
  if (!(c.segment_epsilon >= 0.0 && c.segment_epsilon < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "segment_epsilon must lie in [0, 1)");
  if (c.stride < 1 || c.snapshot_every < 1) throw Error(ErrorCode::kInvalidArgument, "stride and snapshot_every >= 1");
}

Json to_json(const PipelineConfig& c) {
  const auto& p = c.planner;
  Json cache{{"k", c.cache.k}, {"gamma", c.cache.gamma}};
  if (c.cache.capacity) cache["capacity"] = *c.cache.capacity;
  return Json{
      {"cache", cache},
      {"planner",
       {{"step_size", p.step_size}, {"max_iterations", p.max_iterations}, {"goal_bias", p.goal_bias},
        {"temperature", p.temperature}, {"temp_increase_rate", p.temp_increase_rate}, {"n_fail_max", p.n_fail_max},
        {"cost_scale", p.cost_scale}, {"cost_ceiling", p.cost_ceiling}, {"adaptive_temperature", p.adaptive_temperature},
        {"unknown_cost", p.unknown_cost}, {"resample_spacing", p.resample_spacing},
        {"shortcut_attempts", p.shortcut_attempts}, {"offset", p.offset}}},
      {"reasoner",
       {{"history_length", c.reasoner.history_length},
        {"min_interval", c.reasoner.min_interval},
        {"timeout", c.reasoner.timeout}}},
      {"follower",
       {{"lookahead", c.follower.lookahead}, {"max_speed", c.follower.max_speed},
        {"max_yaw_rate", c.follower.max_yaw_rate}}},
      {"camera", to_json(c.camera)},
      {"selection_delay", c.selection_delay},
      {"tick_rate", c.tick_rate},
      {"timeout", c.timeout},
      {"goal_threshold", c.goal_threshold},
      {"segment_epsilon", c.segment_epsilon},
      {"delta", c.delta},
      {"stride", c.stride},
      {"voxel", c.voxel},
      {"window", c.window},
      {"planning_margin", c.planning_margin},
      {"safety_margin", c.safety_margin},
      {"collision_clearance", c.collision_clearance},
      {"dynamic_labels", c.dynamic_labels},
      {"gps_goal", c.gps_goal},
      {"gps_sigma", c.gps_sigma},
      {"snapshot_every", c.snapshot_every},
      {"embed_seed", c.embed_seed}};
}

PipelineConfig pipeline_config_from_json(const Json& doc) {
  PipelineConfig c;
  try {
    if (doc.contains("cache")) {
      const auto& j = doc.at("cache");
      c.cache.k = j.value("k", c.cache.k);
      c.cache.gamma = j.value("gamma", c.cache.gamma);
      if (j.contains("capacity")) c.cache.capacity = j.at("capacity").get<std::size_t>();
    }
    if (doc.contains("planner")) {
      const auto& j = doc.at("planner");
      auto& p = c.planner;
      p.step_size = j.value("step_size", p.step_size);
      p.max_iterations = j.value("max_iterations", p.max_iterations);
      p.goal_bias = j.value("goal_bias", p.goal_bias);
      p.temperature = j.value("temperature", p.temperature);
      p.temp_increase_rate = j.value("temp_increase_rate", p.temp_increase_rate);
      p.n_fail_max = j.value("n_fail_max", p.n_fail_max);
      p.cost_scale = j.value("cost_scale", p.cost_scale);
      p.cost_ceiling = j.value("cost_ceiling", p.cost_ceiling);
      p.adaptive_temperature = j.value("adaptive_temperature", p.adaptive_temperature);
      p.unknown_cost = j.value("unknown_cost", p.unknown_cost);
      p.resample_spacing = j.value("resample_spacing", p.resample_spacing);
      p.shortcut_attempts = j.value("shortcut_attempts", p.shortcut_attempts);
      p.offset = j.value("offset", p.offset);
    }
    if (doc.contains("reasoner")) {
      const auto& j = doc.at("reasoner");
      c.reasoner.history_length = j.value("history_length", c.reasoner.history_length);
      c.reasoner.min_interval = j.value("min_interval", c.reasoner.min_interval);
      c.reasoner.timeout = j.value("timeout", c.reasoner.timeout);
    }
    if (doc.contains("follower")) {
      const auto& j = doc.at("follower");
      c.follower.lookahead = j.value("lookahead", c.follower.lookahead);
      c.follower.max_speed = j.value("max_speed", c.follower.max_speed);
      c.follower.max_yaw_rate = j.value("max_yaw_rate", c.follower.max_yaw_rate);
    }
    if (doc.contains("camera")) c.camera = camera_from_json(doc.at("camera"));
    c.selection_delay = doc.value("selection_delay", c.selection_delay);
    c.tick_rate = doc.value("tick_rate", c.tick_rate);
    c.timeout = doc.value("timeout", c.timeout);
    c.goal_threshold = doc.value("goal_threshold", c.goal_threshold);
    c.segment_epsilon = doc.value("segment_epsilon", c.segment_epsilon);
    c.delta = doc.value("delta", c.delta);
    c.stride = doc.value("stride", c.stride);
    c.voxel = doc.value("voxel", c.voxel);
    c.window = doc.value("window", c.window);
    c.planning_margin = doc.value("planning_margin", c.planning_margin);
    c.safety_margin = doc.value("safety_margin", c.safety_margin);
    c.collision_clearance = doc.value("collision_clearance", c.collision_clearance);
    c.dynamic_labels = doc.value("dynamic_labels", c.dynamic_labels);
    c.gps_goal = doc.value("gps_goal", c.gps_goal);
    c.gps_sigma = doc.value("gps_sigma", c.gps_sigma);
    c.snapshot_every = doc.value("snapshot_every", c.snapshot_every);
    c.embed_seed = doc.value("embed_seed", c.embed_seed);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("pipeline config: ") + e.what());
  }
  validate(c);
  return c;
}

namespace {

costmap::OccupancyGrid aligned_window(const Pose2D& center, double size, double res, double lx, double ly) {
  const int n = static_cast<int>(std::lround(size / res));
  const double ox = lx + res * std::round((center.x - size / 2.0 - lx) / res);
  const double oy = ly + res * std::round((center.y - size / 2.0 - ly) / res);
  return costmap::OccupancyGrid(n, n, res, Pose2D{ox, oy, 0.0});
}

}  // namespace

std::optional<Pose2D> connected_frontier(const planner::CostLayer& layer, const Pose2D& robot, const Pose2D& goal,
                                         double ceiling, double min_distance) {
  using costmap::CellIndex;
  const auto& g = layer.grid();
  const CellIndex start = g.world_to_cell(robot.x, robot.y);
  if (!g.contains(start)) return std::nullopt;
  const CellIndex goal_cell = g.world_to_cell(goal.x, goal.y);
  auto passable = [&](CellIndex c) {
    return g.contains(c) && g.at(c).state != costmap::CellState::kUnknown && layer.inflated(c) <= ceiling;
  };
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  std::vector<char> seen(static_cast<std::size_t>(g.width()) * g.height(), 0);
  auto idx = [&](CellIndex c) { return static_cast<std::size_t>(c.y) * g.width() + c.x; };
  std::deque<CellIndex> queue{start};
  seen[idx(start)] = 1;
  std::optional<Pose2D> best;
  double best_d = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    bool frontier = c == goal_cell;
    for (int k = 0; k < 4; ++k) {
      const CellIndex n{c.x + kDx[k], c.y + kDy[k]};
      if (g.contains(n) && g.at(n).state == costmap::CellState::kUnknown) frontier = true;
      if (!g.contains(n) || seen[idx(n)] || !passable(n)) continue;
      seen[idx(n)] = 1;
      queue.push_back(n);
    }
    if (!frontier) continue;
    const auto center = g.cell_center(c);
    if (std::hypot(center[0] - robot.x, center[1] - robot.y) < min_distance) continue;
    const double d = std::hypot(center[0] - goal.x, center[1] - goal.y);
    if (d < best_d) {
      best_d = d;
      best = make_pose(center[0], center[1], std::atan2(center[1] - robot.y, center[0] - robot.x));
    }
  }
  return best;
}

Perception::Perception(const PipelineConfig& config, providers::ProviderSet providers, RobotModality modality,
                       const Pose2D& start, double lattice_x, double lattice_y)
    : config_(config),
      providers_(std::move(providers)),
      modality_(std::move(modality)),
      cache_(config.cache),
      grid_(aligned_window(start, config.window, costmap::kDefaultResolution, lattice_x, lattice_y)) {}

PerceptionRecord Perception::process(const providers::Observation& obs, const Pose2D& pose) {
  PerceptionRecord rec;
  std::optional<Embedding> embedding;
  try {
    embedding = providers_.embedder->embed_frame(obs);
  } catch (const Error& e) {
    rec.provider_errors.push_back(std::string("embed: ") + e.what());
  }
  std::optional<cache::CacheDecision> decision;
  if (embedding) decision = cache_.check_novelty(*embedding);
  if (decision && std::isfinite(decision->d_min)) rec.d_min = decision->d_min;
  if (decision && decision->hit()) {
    rec.cache_hit = true;
    ++cache_hits_;
    table_ = *decision->aggregated;
  } else {
    ++scene_queries_;
    try {
      CostTable fresh = providers_.scene_risk->infer_scene_risks(obs, modality_, table_);
      if (embedding) cache_.insert_entry(*embedding, fresh);
      table_ = fresh;
      rec.fresh_table = std::move(fresh);
    } catch (const Error& e) {
      rec.provider_errors.push_back(std::string("scene_risk: ") + e.what());
    }
  }

  grid_.scroll_to(pose.x, pose.y);
  dynamic_.clear();
  if (table_.empty()) return rec;

  costmap::PixelCostmap pixels;
  try {
    const auto stack = providers_.segmenter->segment_classes(obs, table_.labels(), providers::kDefaultBackgroundLabels);
    pixels = costmap::build_pixel_costmap(stack, table_, config_.delta);
  } catch (const Error& e) {
    rec.provider_errors.push_back(std::string("segment: ") + e.what());
    return rec;
  }
  rec.costmap_digest = hex64(fnv1a64(pack_doubles(pixels.values.data())));

  Image<double> static_depth = obs.depth;
  Image<double> dynamic_depth(obs.depth.width(), obs.depth.height(), std::numeric_limits<double>::infinity());
  for (int v = 0; v < obs.depth.height(); ++v) {
    for (int u = 0; u < obs.depth.width(); ++u) {
      const int w = pixels.winner.at(u, v);
      if (w < 0) continue;
      const auto& label = pixels.labels[w];
      if (std::find(config_.dynamic_labels.begin(), config_.dynamic_labels.end(), label) == config_.dynamic_labels.end())
        continue;
      dynamic_depth.at(u, v) = obs.depth.at(u, v);
      static_depth.at(u, v) = std::numeric_limits<double>::infinity();
    }
  }
  auto to_world = [&](const Image<double>& depth) {
    auto pts = costmap::backproject_risk_points(pixels, depth, config_.camera, config_.stride);
    return costmap::robot_to_world(costmap::voxel_downsample(pts, config_.voxel), pose);
  };
  const auto static_points = to_world(static_depth);
  dynamic_ = to_world(dynamic_depth);
  costmap::update_occupancy_grid(grid_, static_points, pose);
  rec.static_points = static_points.size();
  rec.dynamic_points = dynamic_.size();
  return rec;
}

costmap::OccupancyGrid Perception::planning_grid(const Pose2D& pose) const {
  costmap::OccupancyGrid g = grid_;
  for (const auto& p : dynamic_) {
    const auto c = g.world_to_cell(p.x, p.y);
    if (!g.contains(c) || p.risk <= 0.0) continue;
    auto& cell = g.at(c);
    if (cell.state != costmap::CellState::kRisk || cell.risk < p.risk) cell = {costmap::CellState::kRisk, p.risk};
  }
  const double r = modality_.footprint_radius;
  const auto lo = g.world_to_cell(pose.x - r, pose.y - r);
  const auto hi = g.world_to_cell(pose.x + r, pose.y + r);
  for (int y = lo.y; y <= hi.y; ++y) {
    for (int x = lo.x; x <= hi.x; ++x) {
      if (!g.contains({x, y}) || g.at({x, y}).state != costmap::CellState::kUnknown) continue;
      const auto center = g.cell_center({x, y});
      if (std::hypot(center[0] - pose.x, center[1] - pose.y) <= r) g.at({x, y}) = {costmap::CellState::kFree, 0.0};
    }
  }
  return g;
}

}  // namespace catnav::sim
