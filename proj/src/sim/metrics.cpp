#include "catnav/sim/metrics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "catnav/core/error.hpp"

namespace catnav::sim {

Json to_json(const EpisodeMetrics& m) {
  Json j{{"task", m.task},
         {"seed", m.seed},
         {"goal_reached", m.goal_reached},
         {"dist_to_goal", m.dist_to_goal},
         {"collisions", m.collisions},
         {"behavior_violation_length", m.behavior_violation_length},
         {"scene_queries", m.scene_queries},
         {"cache_hits", m.cache_hits},
         {"sim_duration", m.sim_duration},
         {"ticks", m.ticks},
         {"held_ticks", m.held_ticks},
         {"selections", m.selections}};
  j["min_agent_clearance"] = std::isfinite(m.min_agent_clearance) ? Json(m.min_agent_clearance) : Json(nullptr);
  return j;
}

EpisodeMetrics episode_metrics_from_json(const Json& j) {
  try {
    EpisodeMetrics m;
    m.task = j.value("task", std::string());
    m.seed = j.value("seed", std::uint64_t{0});
    m.goal_reached = j.at("goal_reached").get<bool>();
    m.dist_to_goal = j.at("dist_to_goal").get<double>();
    m.collisions = j.at("collisions").get<int>();
    m.behavior_violation_length = j.at("behavior_violation_length").get<double>();
    m.scene_queries = j.value("scene_queries", std::uint64_t{0});
    m.cache_hits = j.value("cache_hits", std::uint64_t{0});
    m.sim_duration = j.value("sim_duration", 0.0);
    m.ticks = j.value("ticks", 0);
    m.held_ticks = j.value("held_ticks", 0);
    m.selections = j.value("selections", std::uint64_t{0});
    if (j.contains("min_agent_clearance") && !j.at("min_agent_clearance").is_null())
      m.min_agent_clearance = j.at("min_agent_clearance").get<double>();
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("episode metrics: ") + e.what());
  }
}

TaskSummary compute_metrics(std::span<const EpisodeMetrics> trials) {
  if (trials.empty()) throw Error(ErrorCode::kEmptyInput, "no trials to aggregate");
  TaskSummary s;
  s.task = trials.front().task;
  s.trials = static_cast<int>(trials.size());
  int reached = 0, collided = 0, violated = 0;
  for (const auto& t : trials) {
    reached += t.goal_reached ? 1 : 0;
    collided += t.collisions > 0 ? 1 : 0;
    violated += t.behavior_violation_length > 0.0 ? 1 : 0;
    s.mean_dist_to_goal += t.dist_to_goal;
    s.mean_violation_length += t.behavior_violation_length;
    s.scene_queries += t.scene_queries;
    s.cache_hits += t.cache_hits;
  }
  const double n = static_cast<double>(trials.size());
  s.goal_reaching_pct = 100.0 * reached / n;
  s.collision_rate_pct = 100.0 * collided / n;
  s.violation_rate_pct = 100.0 * violated / n;
  s.mean_dist_to_goal /= n;
  s.mean_violation_length /= n;
  return s;
}

EpisodeMetrics metrics_from_replay(const std::filesystem::path& log) {
  std::ifstream in(log);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + log.string());
  std::string line, last;
  while (std::getline(in, line)) {
    if (line.find("\"type\":\"metrics\"") != std::string::npos) last = line;
  }
  if (last.empty()) throw Error(ErrorCode::kParseError, log.string() + " has no metrics record");
  return episode_metrics_from_json(parse_text(last).at("metrics"));
}

std::string trials_csv(std::span<const EpisodeMetrics> trials) {
  std::ostringstream out;
  out << std::setprecision(6)
      << "task,seed,goal_reached,dist_to_goal,collisions,behavior_violation_length,scene_queries,cache_hits,"
         "sim_duration,min_agent_clearance,held_ticks\n";
  for (const auto& t : trials) {
    out << t.task << ',' << t.seed << ',' << (t.goal_reached ? 1 : 0) << ',' << t.dist_to_goal << ',' << t.collisions
        << ',' << t.behavior_violation_length << ',' << t.scene_queries << ',' << t.cache_hits << ',' << t.sim_duration
        << ',';
    if (std::isfinite(t.min_agent_clearance)) out << t.min_agent_clearance;
    out << ',' << t.held_ticks << '\n';
  }
  return out.str();
}

std::string summary_csv(std::span<const TaskSummary> summaries) {
  std::ostringstream out;
  out << std::setprecision(6)
      << "task,trials,goal_reaching_pct,mean_dist_to_goal,collision_rate_pct,violation_rate_pct,"
         "mean_violation_length,scene_queries,cache_hits\n";
  for (const auto& s : summaries)
    out << s.task << ',' << s.trials << ',' << s.goal_reaching_pct << ',' << s.mean_dist_to_goal << ','
        << s.collision_rate_pct << ',' << s.violation_rate_pct << ',' << s.mean_violation_length << ','
        << s.scene_queries << ',' << s.cache_hits << '\n';
  return out.str();
}

}  // namespace catnav::sim
