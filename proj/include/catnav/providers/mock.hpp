#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "catnav/providers/interfaces.hpp"
#include "catnav/reasoning/mock_select.hpp"

namespace catnav::providers {

/// Histogram embedder: each class gets a fixed pseudo-random unit direction
/// derived from (seed, label); a frame embeds to the normalized
/// fraction-weighted sum of its class directions.
class MockEmbedder : public Embedder {
 public:
  explicit MockEmbedder(std::uint64_t seed = 0x5eed);
  Embedding embed_frame(const Observation& obs) override;
  Embedding embed_histogram(const std::map<std::string, double>& histogram);

 private:
  const std::vector<double>& direction(const std::string& label);

  std::uint64_t seed_;
  std::mutex mutex_;
  std::unordered_map<std::string, std::vector<double>> directions_;
};

/// True class gets 1 - epsilon, every other channel epsilon / (K - 1). Pixels
/// whose class was not requested fall to the first background channel (sky
/// pixels to a "sky" channel when requested).
class MockSegmenter : public Segmenter {
 public:
  explicit MockSegmenter(double epsilon = 0.1);
  costmap::ClassProbabilityStack segment_classes(const Observation& obs, const std::vector<std::string>& labels,
                                                 const std::vector<std::string>& background) override;

 private:
  double epsilon_;
};

/// Fixed risk per class name; classes without a fixture get `default_risk`.
std::map<std::string, double> default_risk_fixtures();

class MockSceneRisk : public SceneRiskEstimator {
 public:
  explicit MockSceneRisk(std::map<std::string, double> fixtures = default_risk_fixtures(), double default_risk = 0.5);
  CostTable infer_scene_risks(const Observation& obs, const RobotModality& modality, const CostTable& prior) override;
  CostTable risks_for(const std::vector<std::string>& visible, const CostTable& prior) const;

 private:
  std::map<std::string, double> fixtures_;
  double default_risk_;
};

class MockGoalDetector : public GoalDetector {
 public:
  GoalPointResponse detect_goal_point(const Observation& obs, const std::string& goal_text) override;
};

/// Scores proposals with mock_select against scene truth and answers in the
/// two-line reply format.
class MockPathSelector : public PathSelector {
 public:
  MockPathSelector(std::shared_ptr<const reasoning::SceneTruth> truth, BehaviorSpec behavior,
                   reasoning::MockSelectConfig config = {});
  std::string select_path(const reasoning::SelectionRequest& request) override;

 private:
  std::shared_ptr<const reasoning::SceneTruth> truth_;
  BehaviorSpec behavior_;
  reasoning::MockSelectConfig config_;
};

ProviderSet make_mock_providers(std::shared_ptr<const reasoning::SceneTruth> truth, const BehaviorSpec& behavior,
                                double segment_epsilon = 0.1, std::uint64_t embed_seed = 0x5eed);

}  // namespace catnav::providers
