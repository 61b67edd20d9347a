#include "catnav/cache/visuosemantic_cache.hpp"

#include "catnav/core/error.hpp"
#include "catnav/core/raster.hpp"
#include "catnav/core/serialize.hpp"

namespace catnav::cache {

void VisuosemanticCache::save_snapshot(const std::filesystem::path& path) const {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json config{{"k", config_.k}, {"gamma", config_.gamma}};
  config["capacity"] = config_.capacity ? Json(*config_.capacity) : Json(nullptr);
  doc["config"] = std::move(config);

  Json items = Json::array();
  std::shared_lock lock(mutex_);
  doc["next_index"] = next_index_;
  for (const auto& entry : entries_) {
    items.push_back(Json{{"insert_index", entry->insert_index},
                         {"embedding", to_json(entry->embedding)},
                         {"table", to_json(entry->table)}});
  }
  lock.unlock();
  doc["entries"] = std::move(items);
  write_file(path, canonical_text(doc));
}

VisuosemanticCache VisuosemanticCache::load_snapshot(const std::filesystem::path& path) {
  const Json doc = parse_text(read_file(path));
  check_schema_version(doc);
  CacheConfig config;
  if (auto it = doc.find("config"); it != doc.end()) {
    config.k = it->value("k", config.k);
    config.gamma = it->value("gamma", config.gamma);
    if (auto cap = it->find("capacity"); cap != it->end() && !cap->is_null()) config.capacity = cap->get<std::size_t>();
  }
  VisuosemanticCache cache(config);
  for (const auto& item : doc.at("entries")) {
    auto table = validate_cost_table(item.at("table"));
    if (table.source() != TableSource::kFreshQuery)
      throw Error(ErrorCode::kSourceMismatch, "snapshot entries must hold fresh tables");
    cache.entries_.push_back(std::make_shared<const CacheEntry>(
        CacheEntry{embedding_from_json(item.at("embedding")), std::move(table), item.at("insert_index").get<std::uint64_t>()}));
  }
  cache.next_index_ = doc.value("next_index", static_cast<std::uint64_t>(cache.entries_.size()));
  return cache;
}

}  // namespace catnav::cache
