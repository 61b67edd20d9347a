#include "catnav/sim/ablation.hpp"

#include <cmath>
#include <fstream>

#include "catnav/core/error.hpp"
#include "catnav/core/random.hpp"
#include "catnav/core/raster.hpp"
#include "catnav/core/serialize.hpp"
#include "catnav/providers/mock.hpp"

namespace catnav::sim {

std::vector<StreamFrame> make_ablation_stream(const StreamConfig& c) {
  if (c.frames < 1 || c.clusters < 1 || c.classes_per_cluster < 1 || c.clutter_classes < 0)
    throw Error(ErrorCode::kInvalidArgument, "stream sizes must be positive");
  Rng rng(mix_seed(c.seed, 0xab1a));
  std::vector<std::vector<double>> base(c.clusters);
  for (auto& w : base)
    for (int k = 0; k < c.classes_per_cluster; ++k) w.push_back(rng.uniform(0.5, 1.5));

  std::vector<StreamFrame> out;
  out.reserve(c.frames);
  for (int f = 0; f < c.frames; ++f) {
    StreamFrame frame;
    frame.cluster = static_cast<int>(static_cast<long long>(f) * c.clusters / c.frames);
    double total = 0.0;
    for (int k = 0; k < c.classes_per_cluster; ++k) {
      const double w = base[frame.cluster][k] * std::exp(c.weight_noise * rng.normal());
      frame.histogram["c" + std::to_string(frame.cluster) + "_" + std::to_string(k)] = w;
      total += w;
    }
    double clutter = 0.0;
    for (int k = 0; k < c.clutter_classes; ++k) {
      const double w = c.clutter_weight * rng.uniform();
      frame.histogram["clutter_" + std::to_string(k)] = w;
      clutter += w;
    }
    for (auto& [label, w] : frame.histogram)
      if (!label.starts_with("clutter_")) w *= (1.0 - clutter) / total;
    out.push_back(std::move(frame));
  }
  return out;
}

void save_stream(const std::vector<StreamFrame>& stream, const std::filesystem::path& path) {
  std::string text;
  for (const auto& f : stream) {
    text += Json{{"cluster", f.cluster}, {"histogram", f.histogram}}.dump();
    text += '\n';
  }
  write_file(path, text);
}

std::vector<StreamFrame> load_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<StreamFrame> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = parse_text(line);
    try {
      out.push_back({j.at("cluster").get<int>(), j.at("histogram").get<std::map<std::string, double>>()});
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("stream frame: ") + e.what());
    }
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyInput, path.string() + " holds no frames");
  return out;
}

AblationResult run_cache_ablation(const std::vector<StreamFrame>& stream, const cache::CacheConfig& config,
                                  std::uint64_t embed_seed) {
  providers::MockEmbedder embedder(embed_seed);
  providers::MockSceneRisk risk;
  cache::VisuosemanticCache cache(config);
  AblationResult r;
  CostTable prior;
  for (const auto& frame : stream) {
    const Embedding e = embedder.embed_histogram(frame.histogram);
    const auto decision = cache.check_novelty(e);
    ++r.frames;
    if (decision.hit()) {
      ++r.cache_hits;
      prior = *decision.aggregated;
      continue;
    }
    ++r.scene_queries;
    std::vector<std::string> visible;
    for (const auto& [label, w] : frame.histogram)
      if (w > 0.0) visible.push_back(label);
    prior = risk.risks_for(visible, prior);
    cache.insert_entry(e, prior);
  }
  r.hit_rate = r.frames ? static_cast<double>(r.cache_hits) / r.frames : 0.0;
  r.query_reduction_pct = r.frames ? 100.0 * (1.0 - static_cast<double>(r.scene_queries) / r.frames) : 0.0;
  return r;
}

}  // namespace catnav::sim
