#pragma once

#include <string>
#include <vector>

#include "catnav/core/types.hpp"
#include "catnav/costmap/pixel_costmap.hpp"
#include "catnav/providers/observation.hpp"
#include "catnav/reasoning/reasoner.hpp"

namespace catnav::providers {

inline const std::vector<std::string> kDefaultBackgroundLabels = {"background", "sky", "nothing"};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed_frame(const Observation& obs) = 0;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  /// Channels for `labels` followed by `background` labels.
  virtual costmap::ClassProbabilityStack segment_classes(const Observation& obs, const std::vector<std::string>& labels,
                                                         const std::vector<std::string>& background) = 0;
};

class SceneRiskEstimator {
 public:
  virtual ~SceneRiskEstimator() = default;
  virtual CostTable infer_scene_risks(const Observation& obs, const RobotModality& modality,
                                      const CostTable& prior) = 0;
};

struct GoalPointResponse {
  double u_norm = 0.0;
  double v_norm = 0.0;
  bool found = false;
};

class GoalDetector {
 public:
  virtual ~GoalDetector() = default;
  virtual GoalPointResponse detect_goal_point(const Observation& obs, const std::string& goal_text) = 0;
};

using PathSelector = reasoning::PathSelector;

/// The full set a pipeline needs; members may share one object.
struct ProviderSet {
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<Segmenter> segmenter;
  std::shared_ptr<SceneRiskEstimator> scene_risk;
  std::shared_ptr<GoalDetector> goal;
  std::shared_ptr<PathSelector> selector;
};

}  // namespace catnav::providers
