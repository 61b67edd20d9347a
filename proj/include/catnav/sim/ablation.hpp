#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "catnav/cache/visuosemantic_cache.hpp"

namespace catnav::sim {

/// One frame of a synthetic perception stream, reduced to its class histogram.
struct StreamFrame {
  int cluster = 0;
  std::map<std::string, double> histogram;
};

/// Clusters own disjoint class sets. Each frame jitters its cluster's base
/// weights multiplicatively and sprinkles shared clutter classes.
struct StreamConfig {
  int frames = 2000;
  int clusters = 10;
  int classes_per_cluster = 8;
  double weight_noise = 0.075;  // sigma of the log-normal weight jitter
  int clutter_classes = 8;
  double clutter_weight = 0.02;  // max fraction of one clutter class
  std::uint64_t seed = 1;
};

std::vector<StreamFrame> make_ablation_stream(const StreamConfig& config);
void save_stream(const std::vector<StreamFrame>& stream, const std::filesystem::path& path);
std::vector<StreamFrame> load_stream(const std::filesystem::path& path);

struct AblationResult {
  std::uint64_t frames = 0;
  std::uint64_t scene_queries = 0;
  std::uint64_t cache_hits = 0;
  double hit_rate = 0.0;
  double query_reduction_pct = 0.0;  // vs querying on every frame
};

/// Replays the stream through the novelty gate with mock embeddings and mock
/// scene-risk answers on every miss.
AblationResult run_cache_ablation(const std::vector<StreamFrame>& stream, const cache::CacheConfig& config,
                                  std::uint64_t embed_seed = 0x5eed);

}  // namespace catnav::sim
