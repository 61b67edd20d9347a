#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "catnav/core/types.hpp"

namespace catnav::cache {

struct CacheEntry {
  Embedding embedding;
  CostTable table;
  std::uint64_t insert_index = 0;
};

using EntryRef = std::shared_ptr<const CacheEntry>;

struct CacheConfig {
  int k = 5;
  double gamma = 0.55;
  std::optional<std::size_t> capacity;
};

void validate(const CacheConfig& config);

struct Neighbor {
  EntryRef entry;
  double distance = 0.0;
};

enum class DecisionKind { kHit, kMiss };

struct CacheDecision {
  DecisionKind kind = DecisionKind::kMiss;
  double d_min = std::numeric_limits<double>::infinity();
  std::vector<Neighbor> neighbors;
  std::optional<CostTable> aggregated;

  bool hit() const noexcept { return kind == DecisionKind::kHit; }
};

struct CacheStats {
  std::uint64_t scene_queries = 0;
  std::uint64_t cache_hits = 0;
  double cache_rate_per_s = 0.0;
  double query_rate_per_s = 0.0;
};

/// Mean risk per class over the tables that contain it. The output holds the
/// union of all labels; the scene description comes from the first (nearest)
/// table. Throws kEmptyInput on an empty list.
CostTable aggregate_tables(std::span<const CostTable> neighbors);

/// Embedding store with novelty gating. Lookups take a shared lock and return
/// entry handles, so a decision stays valid even if the entry is evicted later.
class VisuosemanticCache {
 public:
  explicit VisuosemanticCache(CacheConfig config = {});

  const CacheConfig& config() const noexcept { return config_; }

  /// min(k, N) nearest entries, ascending by distance, ties by insert order.
  std::vector<Neighbor> knn_lookup(const Embedding& query, int k) const;

  /// Hit iff the store is non-empty and d_min <= gamma. Hits carry the
  /// aggregate over the k nearest tables. Every call is counted in stats.
  CacheDecision check_novelty(const Embedding& query);

  /// Appends a fresh provider table; evicts FIFO when a capacity is set.
  std::size_t insert_entry(const Embedding& embedding, const CostTable& table);

  std::size_t size() const;
  std::vector<EntryRef> entries() const;

  /// Rates are counts divided by `elapsed_seconds` (simulated or wall clock).
  CacheStats cache_stats(double elapsed_seconds) const;
  void reset_stats();

  void save_snapshot(const std::filesystem::path& path) const;
  static VisuosemanticCache load_snapshot(const std::filesystem::path& path);

  VisuosemanticCache(VisuosemanticCache&& other) noexcept;
  VisuosemanticCache& operator=(VisuosemanticCache&&) = delete;

 private:
  CacheConfig config_;
  mutable std::shared_mutex mutex_;
  std::deque<EntryRef> entries_;
  std::uint64_t next_index_ = 0;
  std::atomic<std::uint64_t> scene_queries_{0};
  std::atomic<std::uint64_t> cache_hits_{0};
};

}  // namespace catnav::cache
