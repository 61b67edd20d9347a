#include "catnav/providers/remote.hpp"

#include <cstdlib>

#include "catnav/core/error.hpp"
#include "catnav/providers/protocol.hpp"

namespace catnav::providers {

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<64>& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<64>& sem_;
};

}  // namespace

void validate(const ProviderEndpointConfig& c) {
  if (c.base_url.empty()) throw Error(ErrorCode::kInvalidArgument, "base_url is empty");
  if (!(c.timeout > 0.0)) throw Error(ErrorCode::kInvalidArgument, "timeout must be > 0");
  if (c.retry_count < 0) throw Error(ErrorCode::kInvalidArgument, "retry_count must be >= 0");
  if (c.max_in_flight < 1 || c.max_in_flight > 64)
    throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be in [1, 64]");
}

ProviderEndpointConfig endpoint_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "endpoint config must be an object");
  if (doc.contains("api_key")) throw Error(ErrorCode::kInvalidArgument, "api_key must come from api_key_env");
  ProviderEndpointConfig c;
  try {
    c.base_url = doc.value("base_url", c.base_url);
    c.timeout = doc.value("timeout", c.timeout);
    c.retry_count = doc.value("retry_count", c.retry_count);
    c.max_in_flight = doc.value("max_in_flight", c.max_in_flight);
    if (doc.contains("api_key_env") && !doc["api_key_env"].is_null())
      c.api_key_env = doc["api_key_env"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  validate(c);
  return c;
}

Json to_json(const ProviderEndpointConfig& c) {
  Json doc{{"base_url", c.base_url}, {"timeout", c.timeout}, {"retry_count", c.retry_count},
           {"max_in_flight", c.max_in_flight}};
  doc["api_key_env"] = c.api_key_env ? Json(*c.api_key_env) : Json(nullptr);
  return doc;
}

RemoteProvider::RemoteProvider(ProviderEndpointConfig config, std::shared_ptr<Transport> transport)
    : config_((validate(config), std::move(config))),
      transport_(transport ? std::move(transport) : std::make_shared<HttpTransport>(config_.base_url)),
      slots_(config_.max_in_flight) {}

std::size_t RemoteProvider::attempts() const {
  std::lock_guard lock(mutex_);
  return attempts_;
}

Json RemoteProvider::call(const std::string& path, int frame_id, Json payload) {
  const std::string body = canonical_text(wire::envelope(frame_id, std::move(payload)));
  std::map<std::string, std::string> headers;
  if (config_.api_key_env) {
    if (const char* key = std::getenv(config_.api_key_env->c_str())) headers["Authorization"] = std::string("Bearer ") + key;
  }

  SlotGuard slot(slots_);
  std::string last_detail;
  for (int attempt = 0; attempt <= config_.retry_count; ++attempt) {
    {
      std::lock_guard lock(mutex_);
      ++attempts_;
    }
    HttpResponse res;
    try {
      res = transport_->post(path, body, headers, config_.timeout);
    } catch (const Error& e) {
      last_detail = e.what();
      continue;
    }
    if (res.status == 200) {
      const Json doc = parse_text(res.body);
      int echo = -1;
      Json out = wire::open_envelope(doc, echo);
      if (echo != frame_id) throw Error(ErrorCode::kParseError, path + " echoed frame_id " + std::to_string(echo));
      return out;
    }
    bool retryable = res.status >= 500;
    last_detail = "HTTP " + std::to_string(res.status);
    try {
      const Json err = Json::parse(res.body);
      retryable = err.value("retryable", retryable);
      last_detail += " " + err.value("code", std::string()) + ": " + err.value("detail", std::string());
    } catch (const Json::exception&) {
    }
    if (!retryable) throw Error(ErrorCode::kProviderFailure, path + " rejected: " + last_detail);
  }
  throw Error(ErrorCode::kProviderFailure, path + " failed after " + std::to_string(config_.retry_count + 1) +
                                               " attempts: " + last_detail);
}

Embedding RemoteProvider::embed_frame(const Observation& obs) {
  return wire::embedding_from_payload(call(wire::kEmbed, obs.frame_id, Json{{"image", wire::image_to_json(obs.rgb)}}));
}

costmap::ClassProbabilityStack RemoteProvider::segment_classes(const Observation& obs,
                                                               const std::vector<std::string>& labels,
                                                               const std::vector<std::string>& background) {
  std::vector<std::string> all = labels;
  all.insert(all.end(), background.begin(), background.end());
  try {
    auto stack = wire::stack_from_payload(call(
        wire::kSegment, obs.frame_id,
        Json{{"image", wire::image_to_json(obs.rgb)}, {"labels", labels}, {"background", background}}));
    std::lock_guard lock(mutex_);
    last_stack_ = {obs.frame_id, all, stack};
    return stack;
  } catch (const Error&) {
    std::lock_guard lock(mutex_);
    if (last_stack_.stack && last_stack_.labels == all && obs.frame_id - last_stack_.frame_id <= 2 &&
        obs.frame_id >= last_stack_.frame_id)
      return *last_stack_.stack;
    throw;
  }
}

CostTable RemoteProvider::infer_scene_risks(const Observation& obs, const RobotModality& modality,
                                            const CostTable& prior) {
  const Json payload = call(wire::kSceneRisk, obs.frame_id,
                            Json{{"image", wire::image_to_json(obs.rgb)},
                                 {"modality", to_json(modality)},
                                 {"prior", to_json(prior)}});
  if (!payload.contains("table")) throw Error(ErrorCode::kMissingField, "scene_risk reply has no table");
  return validate_cost_table(payload.at("table")).with_source(TableSource::kFreshQuery);
}

GoalPointResponse RemoteProvider::detect_goal_point(const Observation& obs, const std::string& goal_text) {
  try {
    return wire::goal_from_payload(
        call(wire::kGoalPoint, obs.frame_id, Json{{"image", wire::image_to_json(obs.rgb)}, {"goal_text", goal_text}}));
  } catch (const Error&) {
    return {};
  }
}

std::string RemoteProvider::select_path(const reasoning::SelectionRequest& request) {
  const Json payload = call(wire::kSelectPath, request.frame_id, wire::select_request_payload(request));
  try {
    return payload.at("reply").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad select_path reply: ") + e.what());
  }
}

ProviderSet make_remote_providers(const std::shared_ptr<RemoteProvider>& remote) {
  return ProviderSet{remote, remote, remote, remote, remote};
}

}  // namespace catnav::providers
