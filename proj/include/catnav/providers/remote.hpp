#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "catnav/providers/interfaces.hpp"
#include "catnav/providers/transport.hpp"

namespace catnav::providers {

struct ProviderEndpointConfig {
  std::string base_url = "http://127.0.0.1:8765";
  double timeout = 10.0;
  int retry_count = 2;
  /// Name of the environment variable holding the API key, if any.
  std::optional<std::string> api_key_env;
  int max_in_flight = 2;
};

void validate(const ProviderEndpointConfig& config);
/// Missing keys keep their defaults. Inline credentials ("api_key") are
/// rejected; name the environment variable in "api_key_env" instead.
ProviderEndpointConfig endpoint_config_from_json(const Json& doc);
Json to_json(const ProviderEndpointConfig& config);

/// Client for the model-adapter protocol. Every call retries transport
/// failures, 5xx replies and retryable error bodies up to retry_count times,
/// then raises exactly one kProviderFailure.
class RemoteProvider : public Embedder,
                       public Segmenter,
                       public SceneRiskEstimator,
                       public GoalDetector,
                       public PathSelector {
 public:
  RemoteProvider(ProviderEndpointConfig config, std::shared_ptr<Transport> transport = nullptr);

  Embedding embed_frame(const Observation& obs) override;
  costmap::ClassProbabilityStack segment_classes(const Observation& obs, const std::vector<std::string>& labels,
                                                 const std::vector<std::string>& background) override;
  CostTable infer_scene_risks(const Observation& obs, const RobotModality& modality, const CostTable& prior) override;
  /// Failures report found=false instead of throwing.
  GoalPointResponse detect_goal_point(const Observation& obs, const std::string& goal_text) override;
  std::string select_path(const reasoning::SelectionRequest& request) override;

  /// Transport attempts made so far (including retries).
  std::size_t attempts() const;

 private:
  Json call(const std::string& path, int frame_id, Json payload);

  ProviderEndpointConfig config_;
  std::shared_ptr<Transport> transport_;
  std::counting_semaphore<64> slots_;
  mutable std::mutex mutex_;
  std::size_t attempts_ = 0;

  struct LastStack {
    int frame_id = 0;
    std::vector<std::string> labels;
    std::optional<costmap::ClassProbabilityStack> stack;
  } last_stack_;
};

ProviderSet make_remote_providers(const std::shared_ptr<RemoteProvider>& remote);

}  // namespace catnav::providers
