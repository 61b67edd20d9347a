#include "catnav/providers/mock.hpp"

#include <algorithm>
#include <cmath>

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"
#include "catnav/core/random.hpp"

namespace catnav::providers {

MockEmbedder::MockEmbedder(std::uint64_t seed) : seed_(seed) {}

const std::vector<double>& MockEmbedder::direction(const std::string& label) {
  std::lock_guard lock(mutex_);
  auto it = directions_.find(label);
  if (it != directions_.end()) return it->second;
  Rng rng(mix_seed(seed_, fnv1a64(label)));
  std::vector<double> v(kEmbeddingDim);
  double sq = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (auto& x : v) x /= norm;
  return directions_.emplace(label, std::move(v)).first->second;
}

Embedding MockEmbedder::embed_histogram(const std::map<std::string, double>& histogram) {
  std::vector<double> sum(kEmbeddingDim, 0.0);
  for (const auto& [label, weight] : histogram) {
    if (!(weight > 0.0)) continue;
    const auto& dir = direction(label);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += weight * dir[i];
  }
  return normalize_embedding(sum);
}

Embedding MockEmbedder::embed_frame(const Observation& obs) { return embed_histogram(obs.class_histogram()); }

MockSegmenter::MockSegmenter(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be in [0,1)");
}

costmap::ClassProbabilityStack MockSegmenter::segment_classes(const Observation& obs,
                                                              const std::vector<std::string>& labels,
                                                              const std::vector<std::string>& background) {
  const int w = obs.truth_class.width();
  const int h = obs.truth_class.height();
  std::vector<costmap::ClassChannel> channels;
  for (const auto& l : labels) channels.push_back({l, false, Image<double>(w, h)});
  for (const auto& l : background) channels.push_back({l, true, Image<double>(w, h)});
  const std::size_t k = channels.size();
  if (k == 0) throw Error(ErrorCode::kEmptyInput, "no labels to segment");

  // Channel per truth class index; last slot is sky.
  std::vector<int> target(obs.class_names.size() + 1, -1);
  auto find = [&](const std::string& name, bool bg) {
    for (std::size_t i = 0; i < k; ++i)
      if (channels[i].background == bg && channels[i].label == name) return static_cast<int>(i);
    return -1;
  };
  const int first_bg = labels.size() < k ? static_cast<int>(labels.size()) : -1;
  for (std::size_t c = 0; c < obs.class_names.size(); ++c) {
    target[c] = find(obs.class_names[c], false);
    if (target[c] < 0) target[c] = first_bg;
  }
  target.back() = find("sky", true);
  if (target.back() < 0) target.back() = first_bg;

  const double hi = k == 1 ? 1.0 : 1.0 - epsilon_;
  const double lo = k == 1 ? 0.0 : epsilon_ / static_cast<double>(k - 1);
  const double uniform = 1.0 / static_cast<double>(k);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const int cls = obs.truth_class.at(u, v);
      const int t = (cls >= 0 && static_cast<std::size_t>(cls) < obs.class_names.size()) ? target[cls] : target.back();
      for (std::size_t i = 0; i < k; ++i)
        channels[i].probability.at(u, v) = t < 0 ? uniform : (static_cast<int>(i) == t ? hi : lo);
    }
  }
  return costmap::ClassProbabilityStack::make(std::move(channels));
}

std::map<std::string, double> default_risk_fixtures() {
  return {{"pavement", 0.1}, {"floor", 0.1},  {"gravel", 0.2}, {"cone", 0.2},  {"grass", 0.3},
          {"paper", 0.4},    {"crops", 0.6},  {"person", 0.7}, {"bench", 0.8}, {"water", 0.9},
          {"wall", 1.0},     {"tree", 1.0},   {"pole", 1.0},  {"marker", 0.1}};
}

MockSceneRisk::MockSceneRisk(std::map<std::string, double> fixtures, double default_risk)
    : fixtures_(std::move(fixtures)), default_risk_(default_risk) {}

CostTable MockSceneRisk::risks_for(const std::vector<std::string>& visible, const CostTable& prior) const {
  std::vector<RiskEntry> entries;
  std::string description;
  for (const auto& label : visible) {
    const auto it = fixtures_.find(label);
    entries.push_back({label, it != fixtures_.end() ? it->second : default_risk_, 0.5});
    description += (description.empty() ? "" : ", ") + label;
  }
  for (const auto& e : prior.entries())
    if (std::find(visible.begin(), visible.end(), e.label) == visible.end()) entries.push_back(e);
  return CostTable::make(std::move(entries), description, TableSource::kFreshQuery);
}

CostTable MockSceneRisk::infer_scene_risks(const Observation& obs, const RobotModality&, const CostTable& prior) {
  return risks_for(obs.visible_classes(), prior);
}

GoalPointResponse MockGoalDetector::detect_goal_point(const Observation& obs, const std::string& goal_text) {
  GoalPointResponse out;
  std::string goal;
  try {
    goal = normalize_label(goal_text);
  } catch (const Error&) {
    return out;
  }
  const auto it = std::find(obs.class_names.begin(), obs.class_names.end(), goal);
  if (it == obs.class_names.end()) return out;
  const int cls = static_cast<int>(it - obs.class_names.begin());
  double su = 0.0, sv = 0.0;
  std::size_t n = 0;
  for (int v = 0; v < obs.truth_class.height(); ++v)
    for (int u = 0; u < obs.truth_class.width(); ++u)
      if (obs.truth_class.at(u, v) == cls) {
        su += u;
        sv += v;
        ++n;
      }
  if (n == 0) return out;
  out.found = true;
  out.u_norm = su / n / obs.truth_class.width();
  out.v_norm = sv / n / obs.truth_class.height();
  return out;
}

MockPathSelector::MockPathSelector(std::shared_ptr<const reasoning::SceneTruth> truth, BehaviorSpec behavior,
                                   reasoning::MockSelectConfig config)
    : truth_(std::move(truth)), behavior_(std::move(behavior)), config_(config) {}

std::string MockPathSelector::select_path(const reasoning::SelectionRequest& request) {
  if (!request.grid) throw Error(ErrorCode::kInvalidArgument, "mock selector needs a grid snapshot");
  return reasoning::format_selection(
      reasoning::mock_select(request.proposals, *request.grid, behavior_, *truth_, config_));
}

ProviderSet make_mock_providers(std::shared_ptr<const reasoning::SceneTruth> truth, const BehaviorSpec& behavior,
                                double segment_epsilon, std::uint64_t embed_seed) {
  ProviderSet set;
  set.embedder = std::make_shared<MockEmbedder>(embed_seed);
  set.segmenter = std::make_shared<MockSegmenter>(segment_epsilon);
  set.scene_risk = std::make_shared<MockSceneRisk>();
  set.goal = std::make_shared<MockGoalDetector>();
  set.selector = std::make_shared<MockPathSelector>(std::move(truth), behavior);
  return set;
}

}  // namespace catnav::providers
