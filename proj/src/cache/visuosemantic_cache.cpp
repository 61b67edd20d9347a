#include "catnav/cache/visuosemantic_cache.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "catnav/core/error.hpp"

namespace catnav::cache {

void validate(const CacheConfig& config) {
  if (config.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!(config.gamma >= 0.0 && config.gamma <= 2.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0,2]");
  if (config.capacity && *config.capacity == 0) throw Error(ErrorCode::kInvalidArgument, "capacity must be positive");
}

namespace {

// Sorting before summation makes the result independent of neighbor order, and
// accumulating offsets from the minimum keeps identical inputs exact.
double stable_mean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const double lo = values.front();
  const double hi = values.back();
  if (lo == hi) return lo;
  double acc = 0.0;
  for (double v : values) acc += v - lo;
  return std::clamp(lo + acc / static_cast<double>(values.size()), lo, hi);
}

}  // namespace

CostTable aggregate_tables(std::span<const CostTable> neighbors) {
  if (neighbors.empty()) throw Error(ErrorCode::kEmptyInput, "aggregate_tables needs at least one table");
  struct Acc {
    std::vector<double> risks;
    std::vector<double> curiosities;
  };
  std::map<std::string, Acc> per_class;
  for (const auto& table : neighbors) {
    for (const auto& e : table.entries()) {
      auto& acc = per_class[e.label];
      acc.risks.push_back(e.risk);
      if (e.curiosity) acc.curiosities.push_back(*e.curiosity);
    }
  }
  std::vector<RiskEntry> entries;
  entries.reserve(per_class.size());
  for (auto& [label, acc] : per_class) {
    RiskEntry e{label, stable_mean(acc.risks), std::nullopt};
    if (!acc.curiosities.empty()) e.curiosity = stable_mean(acc.curiosities);
    entries.push_back(std::move(e));
  }
  return CostTable::make(std::move(entries), neighbors.front().scene_description(), TableSource::kCacheAggregate);
}

VisuosemanticCache::VisuosemanticCache(CacheConfig config) : config_(config) { validate(config_); }

VisuosemanticCache::VisuosemanticCache(VisuosemanticCache&& other) noexcept
    : config_(other.config_),
      entries_(std::move(other.entries_)),
      next_index_(other.next_index_),
      scene_queries_(other.scene_queries_.load()),
      cache_hits_(other.cache_hits_.load()) {}

std::vector<Neighbor> VisuosemanticCache::knn_lookup(const Embedding& query, int k) const {
  std::vector<Neighbor> all;
  {
    std::shared_lock lock(mutex_);
    all.reserve(entries_.size());
    for (const auto& entry : entries_) all.push_back({entry, query.distance(entry->embedding)});
  }
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), all.size());
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.entry->insert_index < b.entry->insert_index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), closer);
  all.resize(take);
  return all;
}

CacheDecision VisuosemanticCache::check_novelty(const Embedding& query) {
  CacheDecision decision;
  decision.neighbors = knn_lookup(query, config_.k);
  if (!decision.neighbors.empty()) decision.d_min = decision.neighbors.front().distance;

  if (!decision.neighbors.empty() && decision.d_min <= config_.gamma) {
    decision.kind = DecisionKind::kHit;
    std::vector<CostTable> tables;
    tables.reserve(decision.neighbors.size());
    for (const auto& n : decision.neighbors) tables.push_back(n.entry->table);
    decision.aggregated = aggregate_tables(tables);
    cache_hits_.fetch_add(1);
  } else {
    decision.kind = DecisionKind::kMiss;
    scene_queries_.fetch_add(1);
  }
  return decision;
}

std::size_t VisuosemanticCache::insert_entry(const Embedding& embedding, const CostTable& table) {
  if (table.source() != TableSource::kFreshQuery)
    throw Error(ErrorCode::kSourceMismatch, "only fresh provider tables may be inserted");
  // Renormalizing guards against drift in embeddings built outside normalize_embedding.
  Embedding stored = normalize_embedding(embedding.values());
  std::unique_lock lock(mutex_);
  entries_.push_back(std::make_shared<const CacheEntry>(CacheEntry{std::move(stored), table, next_index_++}));
  if (config_.capacity) {
    while (entries_.size() > *config_.capacity) entries_.pop_front();
  }
  return entries_.size();
}

std::size_t VisuosemanticCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<EntryRef> VisuosemanticCache::entries() const {
  std::shared_lock lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

CacheStats VisuosemanticCache::cache_stats(double elapsed_seconds) const {
  CacheStats stats;
  stats.scene_queries = scene_queries_.load();
  stats.cache_hits = cache_hits_.load();
  if (elapsed_seconds > 0.0) {
    stats.cache_rate_per_s = static_cast<double>(stats.cache_hits) / elapsed_seconds;
    stats.query_rate_per_s = static_cast<double>(stats.scene_queries) / elapsed_seconds;
  }
  return stats;
}

void VisuosemanticCache::reset_stats() {
  scene_queries_.store(0);
  cache_hits_.store(0);
}

}  // namespace catnav::cache
