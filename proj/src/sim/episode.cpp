#include "catnav/sim/episode.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"
#include "catnav/core/random.hpp"
#include "catnav/costmap/point_cloud.hpp"
#include "catnav/planner/cost_layer.hpp"
#include "catnav/planner/proposals.hpp"
#include "catnav/providers/mock.hpp"
#include "catnav/reasoning/behavior.hpp"
#include "catnav/reasoning/overlay.hpp"
#include "catnav/sim/render.hpp"
#include "catnav/sim/robot.hpp"

namespace catnav::sim {

namespace {

constexpr double kMinSubgoalDistance = 1.0;

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Active path from the robot's projection onward, cut before the first
// segment that is no longer feasible.
std::vector<Pose2D> feasible_prefix(const std::vector<Pose2D>& path, const Pose2D& pose,
                                    const planner::CostLayer& layer, double ceiling, bool& cut) {
  cut = false;
  if (path.empty()) return {};
  const auto [s_robot, d] = project_onto_path(path, pose.x, pose.y);
  (void)d;
  std::vector<Pose2D> out{pose};
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double len = std::hypot(path[i + 1].x - path[i].x, path[i + 1].y - path[i].y);
    s += len;
    if (s <= s_robot) continue;
    const Pose2D& from = out.back();
    if (!layer.segment_feasible(from.x, from.y, path[i + 1].x, path[i + 1].y, ceiling)) {
      cut = true;
      break;
    }
    out.push_back(path[i + 1]);
  }
  if (out.size() < 2) return {};
  return out;
}

}  // namespace

std::string EpisodeResult::replay_text() const {
  std::string out;
  for (const auto& line : replay) {
    out += line;
    out += '\n';
  }
  return out;
}

EpisodeResult run_episode(const Scene& scene, const PipelineConfig& config, std::uint64_t seed,
                          const EpisodeOptions& options) {
  validate(config);
  auto scene_ptr = std::make_shared<const Scene>(scene);
  auto truth = std::make_shared<SceneTruthView>(scene_ptr);
  const providers::ProviderSet prov =
      options.providers ? *options.providers
                        : providers::make_mock_providers(truth, scene.behavior, config.segment_epsilon, config.embed_seed);

  Rng rng(mix_seed(seed, 0x60a1));
  Perception perception(config, prov, scene.modality, scene.start, scene.x_min, scene.y_min);
  reasoning::Reasoner reasoner(prov.selector, config.reasoner, reasoning::DispatchMode::kSimulated,
                               config.selection_delay);

  const double dt = 1.0 / config.tick_rate;
  const int max_ticks = static_cast<int>(std::ceil(config.timeout * config.tick_rate));
  const double safety_radius = scene.modality.footprint_radius + config.safety_margin;
  const double plan_radius = std::max(safety_radius, scene.modality.footprint_radius + config.planning_margin);
  const double risky_ceiling = std::min(1.0, config.planner.cost_ceiling + config.planner.risky_ceiling_increase);
  const double ceiling = config.planner.cost_ceiling;
  FollowerConfig follower = config.follower;
  follower.max_speed = std::min(follower.max_speed, scene.modality.max_speed);

  std::optional<Pose2D> goal_estimate;
  if (!scene.goal_label) {
    Pose2D g = scene.goal;
    if (config.gps_goal) {
      g.x += config.gps_sigma * rng.normal();
      g.y += config.gps_sigma * rng.normal();
    }
    goal_estimate = g;
  }
  const Pose2D search = scene.search_hint.value_or(scene.goal);

  std::vector<std::optional<double>> triggered(scene.agents.size());
  EpisodeResult result;
  EpisodeMetrics& m = result.metrics;
  m.task = scene.name;
  m.seed = seed;
  auto emit = [&](const Json& j) {
    if (options.record_replay) result.replay.push_back(j.dump());
  };
  emit({{"type", "header"}, {"schema_version", kSchemaVersion}, {"seed", seed}, {"scene", to_json(scene)},
        {"config", to_json(config)}});

  RobotState robot{scene.start};
  std::map<int, planner::ProposalSet> submitted;
  std::optional<int> applied_frame;
  std::optional<planner::ProposalLabel> applied_label;
  std::vector<Pose2D> active;
  double next_plan = 0.0;
  bool in_contact = false;

  for (int tick = 0; tick <= max_ticks; ++tick) {
    const double t = tick * dt;
    Json rec{{"type", "tick"}, {"tick", tick}, {"t", t}, {"pose", to_json(robot.pose)}};

    std::vector<AgentPose> agents;
    Json agent_log = Json::array();
    for (std::size_t i = 0; i < scene.agents.size(); ++i) {
      const auto& a = scene.agents[i];
      if (!triggered[i] && (!a.trigger_x || robot.pose.x >= *a.trigger_x)) triggered[i] = t;
      const auto p = triggered[i] ? agent_position(a, t - *triggered[i]) : a.waypoints.front();
      agents.push_back({i, p[0], p[1]});
      agent_log.push_back({p[0], p[1]});
    }
    rec["agents"] = agent_log;

    const auto obs = render_observation(scene, agents, robot.pose, config.camera, tick);
    const auto perceived = perception.process(obs, robot.pose);
    rec["cache"] = {{"hit", perceived.cache_hit}, {"d_min", nullable(perceived.d_min)}};
    if (perceived.fresh_table) rec["table"] = to_json(*perceived.fresh_table);
    rec["costmap"] = perceived.costmap_digest;
    if (!perceived.provider_errors.empty()) rec["errors"] = perceived.provider_errors;

    if (scene.goal_label) {
      try {
        const auto g = prov.goal->detect_goal_point(obs, *scene.goal_label);
        if (g.found) {
          const int u = std::clamp(static_cast<int>(std::lround(g.u_norm * obs.rgb.width())), 0, obs.rgb.width() - 1);
          const int v = std::clamp(static_cast<int>(std::lround(g.v_norm * obs.rgb.height())), 0, obs.rgb.height() - 1);
          const double depth = obs.depth.at(u, v);
          if (std::isfinite(depth) && depth > 0.0) {
            const auto p = costmap::camera_to_robot(config.camera, costmap::pixel_to_camera(config.camera, u, v, depth));
            const double c = std::cos(robot.pose.heading), s = std::sin(robot.pose.heading);
            goal_estimate = make_pose(robot.pose.x + c * p.x - s * p.y, robot.pose.y + s * p.x + c * p.y, 0.0);
          }
        }
      } catch (const Error& e) {
        rec["goal_error"] = e.what();
      }
    }
    const Pose2D goal = goal_estimate.value_or(search);
    if (goal_estimate) rec["goal_estimate"] = to_json(*goal_estimate);

    auto grid = std::make_shared<const costmap::OccupancyGrid>(perception.planning_grid(robot.pose));
    rec["grid"] = hex64(grid->fingerprint());

    reasoner.poll(t);
    if (t >= next_plan && reasoner.in_flight() == 0) {
      // Near an obstacle seen late the robot may sit inside the planning
      // inflation; plan with the tighter safety footprint until it is out.
      planner::CostLayer plan_layer(*grid, config.planner.unknown_cost, plan_radius);
      if (plan_layer.inflated_at(robot.pose.x, robot.pose.y) > ceiling)
        plan_layer = planner::CostLayer(*grid, config.planner.unknown_cost, safety_radius);
      const auto gcell = grid->world_to_cell(goal.x, goal.y);
      Pose2D target = grid->contains(gcell) && plan_layer.inflated(gcell) <= ceiling
                          ? goal
                          : planner::select_frontier_subgoal(plan_layer, robot.pose, goal, ceiling);
      if (std::hypot(target.x - robot.pose.x, target.y - robot.pose.y) < kMinSubgoalDistance &&
          std::hypot(goal.x - robot.pose.x, goal.y - robot.pose.y) > kMinSubgoalDistance) {
        if (auto alt = connected_frontier(plan_layer, robot.pose, goal, ceiling, kMinSubgoalDistance)) target = *alt;
      }
      planner::TrrtConfig pc = config.planner;
      pc.footprint_radius = plan_layer.footprint_radius();
      pc.rng_seed = mix_seed(seed, static_cast<std::uint64_t>(tick));
      auto set = planner::generate_proposals(plan_layer, robot.pose, target, pc, tick);
      const auto overlay = reasoning::render_overlay(obs.rgb, set, config.camera, robot.pose);
      rec["target"] = to_json(target);
      rec["proposals"] = planner::to_json(set);
      if (reasoner.request_selection(overlay, set, scene.modality, scene.behavior, t, grid) ==
          reasoning::RequestOutcome::kDispatched) {
        submitted[tick] = std::move(set);
        next_plan = t + config.reasoner.min_interval;
      }
      reasoner.poll(t);
    }

    Json exchanges = Json::array();
    for (const auto& ex : reasoner.drain_exchanges()) exchanges.push_back(reasoning::to_json(ex));
    if (!exchanges.empty()) rec["exchanges"] = exchanges;

    if (const auto sel = reasoner.active_selection(); sel && sel->frame_id != applied_frame) {
      applied_frame = sel->frame_id;
      applied_label = sel->choice;
      active.clear();
      if (const auto it = submitted.find(sel->frame_id); it != submitted.end() && sel->choice) {
        if (const auto* p = it->second.find(*sel->choice)) active = p->waypoints;
      }
      submitted.erase(submitted.begin(), submitted.lower_bound(sel->frame_id));
    }
    rec["active"] = applied_frame ? Json{{"frame", *applied_frame},
                                          {"label", applied_label ? Json(std::string(planner::to_string(*applied_label)))
                                                                  : Json("none")}}
                                  : Json(nullptr);

    bool cut = false;
    std::vector<Pose2D> follow;
    if (!active.empty()) {
      const planner::CostLayer safety(*grid, config.planner.unknown_cost, safety_radius);
      const double limit = applied_label == planner::ProposalLabel::kRisky ? risky_ceiling : ceiling;
      follow = feasible_prefix(active, robot.pose, safety, limit, cut);
    }
    if (cut) ++m.held_ticks;
    rec["held"] = cut;

    const Pose2D before = robot.pose;
    robot = step_robot(robot, follow, dt, follower);
    m.behavior_violation_length +=
        reasoning::violation_length({before, robot.pose}, scene.behavior.rule, *truth);

    bool contact = disc_hits_terrain(scene, robot.pose.x, robot.pose.y, scene.modality.footprint_radius,
                                     config.collision_clearance);
    for (const auto& ap : agents) {
      const auto& a = scene.agents[ap.agent];
      const double clearance =
          std::hypot(robot.pose.x - ap.x, robot.pose.y - ap.y) - a.radius - scene.modality.footprint_radius;
      m.min_agent_clearance = std::min(m.min_agent_clearance, clearance);
      if (clearance < 0.0) contact = true;
    }
    if (contact && !in_contact) ++m.collisions;
    in_contact = contact;
    rec["collision"] = contact;

    if (tick % config.snapshot_every == 0) {
      emit({{"type", "grid"},
            {"tick", tick},
            {"metadata", perception.grid().metadata()},
            {"pgm_b64", base64_encode(encode_pgm(perception.grid().to_raster()))}});
    }
    emit(rec);

    m.ticks = tick + 1;
    m.sim_duration = (tick + 1) * dt;
    m.dist_to_goal = std::hypot(robot.pose.x - scene.goal.x, robot.pose.y - scene.goal.y);
    if (m.dist_to_goal <= config.goal_threshold) {
      m.goal_reached = true;
      break;
    }
  }
  m.scene_queries = perception.scene_queries();
  m.cache_hits = perception.cache_hits();
  m.selections = reasoner.dispatch_count();
  emit({{"type", "metrics"}, {"metrics", to_json(m)}});
  return result;
}

void write_replay(const EpisodeResult& result, const std::filesystem::path& path) {
  write_file(path, result.replay_text());
}

std::vector<Json> read_replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_text(line));
  }
  return out;
}

}  // namespace catnav::sim
