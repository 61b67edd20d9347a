#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "catnav/core/serialize.hpp"

namespace catnav::sim {

struct EpisodeMetrics {
  std::string task;
  std::uint64_t seed = 0;
  bool goal_reached = false;
  double dist_to_goal = 0.0;
  int collisions = 0;  // contact events, not ticks
  double behavior_violation_length = 0.0;
  std::uint64_t scene_queries = 0;
  std::uint64_t cache_hits = 0;
  double sim_duration = 0.0;
  double min_agent_clearance = std::numeric_limits<double>::infinity();
  int ticks = 0;
  int held_ticks = 0;  // ticks where the active path was cut at an infeasible segment
  std::uint64_t selections = 0;

  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

Json to_json(const EpisodeMetrics& m);
EpisodeMetrics episode_metrics_from_json(const Json& doc);

/// Per-task aggregate laid out like a results table: rates in percent,
/// distances as means.
struct TaskSummary {
  std::string task;
  int trials = 0;
  double goal_reaching_pct = 0.0;
  double mean_dist_to_goal = 0.0;
  double collision_rate_pct = 0.0;  // trials with at least one collision
  double violation_rate_pct = 0.0;  // trials with positive violation length
  double mean_violation_length = 0.0;
  std::uint64_t scene_queries = 0;
  std::uint64_t cache_hits = 0;
};

/// Throws kEmptyInput for an empty batch.
TaskSummary compute_metrics(std::span<const EpisodeMetrics> trials);

/// Metrics recorded at the end of a replay log.
EpisodeMetrics metrics_from_replay(const std::filesystem::path& log);

std::string trials_csv(std::span<const EpisodeMetrics> trials);
std::string summary_csv(std::span<const TaskSummary> summaries);

}  // namespace catnav::sim
