#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "catnav/providers/interfaces.hpp"
#include "catnav/sim/metrics.hpp"
#include "catnav/sim/pipeline.hpp"
#include "catnav/sim/scene.hpp"

namespace catnav::sim {

struct EpisodeOptions {
  /// Defaults to mock providers backed by the scene's ground truth.
  std::optional<providers::ProviderSet> providers;
  bool record_replay = true;
};

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::vector<std::string> replay;  // JSON lines: header, ticks, grid snapshots, metrics

  std::string replay_text() const;
};

/// Runs the closed loop at the configured tick until the goal is within
/// the threshold or the timeout expires. Collisions are counted but do not
/// stop the episode.
EpisodeResult run_episode(const Scene& scene, const PipelineConfig& config, std::uint64_t seed,
                          const EpisodeOptions& options = {});

void write_replay(const EpisodeResult& result, const std::filesystem::path& path);
std::vector<Json> read_replay(const std::filesystem::path& path);

}  // namespace catnav::sim
