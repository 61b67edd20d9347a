#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <thread>

#include "catnav/cache/visuosemantic_cache.hpp"
#include "catnav/core/error.hpp"
#include "catnav/core/raster.hpp"
#include "oracles.hpp"

namespace catnav::cache {
namespace {

Embedding basis(std::size_t i) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  v[i] = 1.0;
  return normalize_embedding(v);
}

CostTable fresh(std::vector<RiskEntry> entries, std::string desc = "") {
  return CostTable::make(std::move(entries), std::move(desc), TableSource::kFreshQuery);
}

TEST(KnnLookup, EmptyStoreReturnsNothing) {
  VisuosemanticCache cache;
  EXPECT_TRUE(cache.knn_lookup(basis(0), 3).empty());
}

TEST(KnnLookup, IdentityQuery) {
  VisuosemanticCache cache;
  cache.insert_entry(basis(0), fresh({{"grass", 0.3, {}}}));
  cache.insert_entry(basis(1), fresh({{"path", 0.1, {}}}));
  auto result = cache.knn_lookup(basis(0), 1);
  ASSERT_EQ(result.size(), 1u);
  EXPECT_EQ(result[0].distance, 0.0);
  EXPECT_EQ(result[0].entry->insert_index, 0u);
}

TEST(KnnLookup, OrthogonalAtRootTwo) {
  VisuosemanticCache cache;
  cache.insert_entry(basis(1), fresh({}));  // orthogonal to the query
  cache.insert_entry(basis(0), fresh({}));  // equal to the query
  auto result = cache.knn_lookup(basis(0), 2);
  ASSERT_EQ(result.size(), 2u);
  EXPECT_EQ(result[0].entry->insert_index, 1u);
  EXPECT_EQ(result[0].distance, 0.0);
  EXPECT_NEAR(result[1].distance, std::sqrt(2.0), 1e-15);
}

TEST(KnnLookup, TiesBrokenByInsertOrder) {
  VisuosemanticCache cache;
  for (int i = 0; i < 4; ++i) cache.insert_entry(basis(5), fresh({}));
  auto result = cache.knn_lookup(basis(5), 4);
  for (std::size_t i = 0; i < result.size(); ++i) EXPECT_EQ(result[i].entry->insert_index, i);
}

TEST(KnnLookup, MatchesExhaustiveSortOracle) {
  std::mt19937_64 rng(3);
  for (int n : {1, 5, 50, 400}) {
    VisuosemanticCache cache;
    std::vector<std::vector<double>> raw;
    for (int i = 0; i < n; ++i) {
      raw.push_back(oracle::random_unit(rng, kEmbeddingDim));
      cache.insert_entry(normalize_embedding(raw.back()), fresh({}));
    }
    const auto stored = cache.entries();
    for (int q = 0; q < 10; ++q) {
      auto query = normalize_embedding(oracle::random_unit(rng, kEmbeddingDim));
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t i = 0; i < stored.size(); ++i) {
        std::vector<double> qv(query.values().begin(), query.values().end());
        all.push_back({oracle::euclid(qv, stored[i]->embedding.values()), i});
      }
      std::sort(all.begin(), all.end());
      for (int k : {1, 5, n + 3}) {
        auto got = cache.knn_lookup(query, k);
        ASSERT_EQ(got.size(), std::min<std::size_t>(k, n));
        for (std::size_t i = 0; i < got.size(); ++i) {
          EXPECT_EQ(got[i].entry->insert_index, all[i].second);
          EXPECT_NEAR(got[i].distance, all[i].first, 1e-12);
        }
      }
    }
  }
}

TEST(CheckNovelty, ColdStartMisses) {
  VisuosemanticCache cache({5, 0.55, {}});
  auto d = cache.check_novelty(basis(0));
  EXPECT_FALSE(d.hit());
  EXPECT_TRUE(std::isinf(d.d_min));
  EXPECT_FALSE(d.aggregated.has_value());
}

TEST(CheckNovelty, IdenticalFrameHits) {
  VisuosemanticCache cache({5, 0.55, {}});
  cache.insert_entry(basis(0), fresh({{"grass", 0.3, {}}}));
  auto d = cache.check_novelty(basis(0));
  EXPECT_TRUE(d.hit());
  EXPECT_EQ(d.d_min, 0.0);
  ASSERT_TRUE(d.aggregated);
  EXPECT_EQ(d.aggregated->source(), TableSource::kCacheAggregate);
}

TEST(CheckNovelty, OrthogonalFrameMisses) {
  VisuosemanticCache cache({5, 0.55, {}});
  cache.insert_entry(basis(1), fresh({}));
  auto d = cache.check_novelty(basis(0));
  EXPECT_FALSE(d.hit());
  EXPECT_NEAR(d.d_min, 1.4142135623730951, 1e-15);
}

TEST(CheckNovelty, ThresholdIsInclusive) {
  VisuosemanticCache cache({1, std::sqrt(2.0), {}});
  cache.insert_entry(basis(1), fresh({}));
  const auto d = cache.check_novelty(basis(0));
  ASSERT_EQ(d.d_min, std::sqrt(2.0));
  EXPECT_TRUE(d.hit());
}

TEST(CheckNovelty, FewerEntriesThanKStillAggregates) {
  VisuosemanticCache cache({5, 2.0, {}});
  cache.insert_entry(basis(0), fresh({{"grass", 0.2, {}}}));
  cache.insert_entry(basis(1), fresh({{"grass", 0.4, {}}}));
  auto d = cache.check_novelty(basis(2));
  ASSERT_TRUE(d.hit());
  EXPECT_EQ(d.neighbors.size(), 2u);
  EXPECT_NEAR(*d.aggregated->risk("grass"), 0.3, 1e-15);
}

TEST(CheckNovelty, GammaTwoAlwaysHitsProperty) {
  std::mt19937_64 rng(5);
  VisuosemanticCache cache({3, 2.0, {}});
  cache.insert_entry(normalize_embedding(oracle::random_unit(rng, kEmbeddingDim)), fresh({}));
  for (int i = 0; i < 200; ++i) {
    auto q = normalize_embedding(oracle::random_unit(rng, kEmbeddingDim));
    EXPECT_TRUE(cache.check_novelty(q).hit());
  }
  std::vector<double> anti(cache.entries()[0]->embedding.values().begin(), cache.entries()[0]->embedding.values().end());
  for (auto& x : anti) x = -x;
  EXPECT_TRUE(cache.check_novelty(normalize_embedding(anti)).hit());
}

TEST(AggregateTables, DirectMean) {
  std::vector<CostTable> tables{fresh({{"grass", 0.3, {}}, {"person", 0.7, {}}}, "near"), fresh({{"grass", 0.5, {}}}, "far")};
  auto out = aggregate_tables(tables);
  EXPECT_NEAR(*out.risk("grass"), 0.4, 1e-15);
  EXPECT_EQ(*out.risk("person"), 0.7);
  EXPECT_EQ(out.source(), TableSource::kCacheAggregate);
  EXPECT_EQ(out.scene_description(), "near");
}

TEST(AggregateTables, SingleNeighborIdentity) {
  auto t = fresh({{"bench", 0.6, 0.5}, {"grass", 0.3, {}}}, "park");
  auto out = aggregate_tables(std::vector<CostTable>{t});
  EXPECT_EQ(out.entries(), t.entries());
  EXPECT_EQ(out.scene_description(), "park");
  EXPECT_EQ(out.source(), TableSource::kCacheAggregate);
}

TEST(AggregateTables, EmptyIsError) {
  EXPECT_THROW(aggregate_tables(std::vector<CostTable>{}), Error);
}

std::vector<CostTable> random_tables(std::mt19937_64& rng, int n_tables, int n_classes) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution present(0.6);
  std::vector<CostTable> tables;
  for (int t = 0; t < n_tables; ++t) {
    std::vector<RiskEntry> entries;
    for (int c = 0; c < n_classes; ++c)
      if (present(rng)) entries.push_back({"c" + std::to_string(c), u(rng), {}});
    tables.push_back(fresh(entries, "t" + std::to_string(t)));
  }
  return tables;
}

TEST(AggregateTables, MatchesPerClassOracleAndProperties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto tables = random_tables(rng, 5, 8);
    std::vector<std::map<std::string, double>> plain;
    for (const auto& t : tables) {
      std::map<std::string, double> m;
      for (const auto& e : t.entries()) m[e.label] = e.risk;
      plain.push_back(m);
    }
    const auto expect = oracle::class_means(plain);
    auto out = aggregate_tables(tables);
    ASSERT_EQ(out.size(), expect.size());
    for (const auto& [label, mean] : expect) {
      ASSERT_TRUE(out.risk(label));
      EXPECT_NEAR(*out.risk(label), mean, 1e-12);
      double lo = 1.0, hi = 0.0;
      for (const auto& m : plain)
        if (auto it = m.find(label); it != m.end()) lo = std::min(lo, it->second), hi = std::max(hi, it->second);
      EXPECT_GE(*out.risk(label), lo);
      EXPECT_LE(*out.risk(label), hi);
    }
    auto shuffled = tables;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(aggregate_tables(shuffled).entries(), out.entries());

    std::vector<CostTable> same(4, tables[0]);
    EXPECT_EQ(aggregate_tables(same).entries(), tables[0].entries());
  }
}

TEST(InsertEntry, GrowsStore) {
  VisuosemanticCache cache;
  EXPECT_EQ(cache.insert_entry(basis(0), fresh({})), 1u);
  for (int i = 1; i < 100; ++i) cache.insert_entry(basis(i), fresh({}));
  EXPECT_EQ(cache.size(), 100u);
}

TEST(InsertEntry, FifoEviction) {
  VisuosemanticCache cache({1, 0.5, 2});
  cache.insert_entry(basis(0), fresh({}));
  cache.insert_entry(basis(1), fresh({}));
  EXPECT_EQ(cache.insert_entry(basis(2), fresh({})), 2u);
  auto entries = cache.entries();
  EXPECT_EQ(entries[0]->insert_index, 1u);
  EXPECT_EQ(entries[1]->insert_index, 2u);
}

TEST(InsertEntry, RejectsNonFreshTables) {
  VisuosemanticCache cache;
  EXPECT_THROW(cache.insert_entry(basis(0), CostTable::make({}, "", TableSource::kCacheAggregate)), Error);
  EXPECT_THROW(cache.insert_entry(basis(0), CostTable::make({}, "", TableSource::kFixture)), Error);
}

TEST(Config, Validation) {
  EXPECT_THROW(VisuosemanticCache({0, 0.5, {}}), Error);
  EXPECT_THROW(VisuosemanticCache({1, 2.5, {}}), Error);
  EXPECT_THROW(VisuosemanticCache({1, -0.1, {}}), Error);
}

TEST(CacheStats, ZeroWhenIdle) {
  VisuosemanticCache cache;
  auto s = cache.cache_stats(10.0);
  EXPECT_EQ(s.scene_queries, 0u);
  EXPECT_EQ(s.cache_hits, 0u);
  EXPECT_EQ(s.cache_rate_per_s, 0.0);
  EXPECT_EQ(s.query_rate_per_s, 0.0);
}

TEST(CacheStats, NineQueriesOverLongStream) {
  // 9 distinct scenes each queried once, then 1000 revisits of those scenes.
  VisuosemanticCache cache({5, 0.55, {}});
  for (int i = 0; i < 9; ++i) {
    auto d = cache.check_novelty(basis(i));
    ASSERT_FALSE(d.hit());
    cache.insert_entry(basis(i), fresh({{"grass", 0.1 * i, {}}}));
  }
  for (int i = 0; i < 1000; ++i) ASSERT_TRUE(cache.check_novelty(basis(i % 9)).hit());
  auto s = cache.cache_stats(100.0);
  EXPECT_EQ(s.scene_queries, 9u);
  EXPECT_EQ(s.cache_hits, 1000u);
  EXPECT_DOUBLE_EQ(s.query_rate_per_s, 0.09);
  EXPECT_DOUBLE_EQ(s.cache_rate_per_s, 10.0);
  cache.reset_stats();
  EXPECT_EQ(cache.cache_stats(1.0).cache_hits, 0u);
}

TEST(CacheStats, GammaZeroOnDistinctFramesNeverHits) {
  VisuosemanticCache cache({5, 0.0, {}});
  for (int i = 0; i < 50; ++i) {
    auto d = cache.check_novelty(basis(i));
    if (!d.hit()) cache.insert_entry(basis(i), fresh({}));
  }
  EXPECT_EQ(cache.cache_stats(1.0).cache_hits, 0u);
  EXPECT_EQ(cache.cache_stats(1.0).scene_queries, 50u);
}

TEST(CacheStats, RaisingGammaNeverLowersHitsProperty) {
  std::mt19937_64 rng(23);
  std::vector<Embedding> centers;
  for (int c = 0; c < 6; ++c) centers.push_back(normalize_embedding(oracle::random_unit(rng, kEmbeddingDim)));
  std::normal_distribution<double> jitter(0.0, 0.012);
  std::uniform_int_distribution<int> pick(0, 5);
  std::vector<Embedding> stream;
  for (int i = 0; i < 300; ++i) {
    const auto& center = centers[pick(rng)];
    std::vector<double> v(center.values().begin(), center.values().end());
    for (auto& x : v) x += jitter(rng);
    stream.push_back(normalize_embedding(v));
  }
  std::uint64_t previous = 0;
  for (double gamma : {0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 1.0, 1.5, 2.0}) {
    VisuosemanticCache cache({5, gamma, {}});
    for (const auto& e : stream)
      if (!cache.check_novelty(e).hit()) cache.insert_entry(e, fresh({}));
    const auto hits = cache.cache_stats(1.0).cache_hits;
    EXPECT_GE(hits, previous) << "gamma " << gamma;
    previous = hits;
  }
}

TEST(Snapshot, RoundTrip) {
  VisuosemanticCache cache({3, 0.4, 10});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i)
    cache.insert_entry(normalize_embedding(oracle::random_unit(rng, kEmbeddingDim)),
                       fresh({{"grass", 0.3, 0.5}, {"c" + std::to_string(i), 0.1 * i, {}}}, "scene"));
  const auto path = std::filesystem::temp_directory_path() / "catnav_cache_snapshot_test.json";
  cache.save_snapshot(path);
  auto loaded = VisuosemanticCache::load_snapshot(path);
  EXPECT_EQ(loaded.config().k, 3);
  EXPECT_EQ(loaded.config().gamma, 0.4);
  EXPECT_EQ(*loaded.config().capacity, 10u);
  auto a = cache.entries();
  auto b = loaded.entries();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i]->embedding, b[i]->embedding);
    EXPECT_EQ(a[i]->table, b[i]->table);
    EXPECT_EQ(a[i]->insert_index, b[i]->insert_index);
  }
  // Saving the loaded cache reproduces the same bytes.
  const auto path2 = std::filesystem::temp_directory_path() / "catnav_cache_snapshot_test2.json";
  loaded.save_snapshot(path2);
  EXPECT_EQ(read_file(path), read_file(path2));
}

TEST(Concurrency, ReadersNeverSeePartialEntries) {
  VisuosemanticCache cache({3, 0.5, 16});
  std::atomic<bool> done{false};
  std::thread writer([&] {
    for (int i = 0; i < 400; ++i) cache.insert_entry(basis(i % kEmbeddingDim), fresh({{"grass", 0.3, {}}}));
    done = true;
  });
  std::vector<std::thread> readers;
  std::atomic<int> bad{0};
  for (int r = 0; r < 3; ++r) {
    readers.emplace_back([&, r] {
      while (!done) {
        for (const auto& n : cache.knn_lookup(basis(r), 3))
          if (n.entry->table.size() != 1 || n.entry->embedding.values().size() != kEmbeddingDim) ++bad;
      }
    });
  }
  writer.join();
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad.load(), 0);
  EXPECT_EQ(cache.size(), 16u);
}

}  // namespace
}  // namespace catnav::cache
