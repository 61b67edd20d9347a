#include "catnav/providers/mock_server.hpp"

#include <httplib.h>

#include "catnav/core/error.hpp"
#include "catnav/providers/protocol.hpp"

namespace catnav::providers {

namespace {

class ActiveCounter {
 public:
  ActiveCounter(std::atomic<int>& active, std::atomic<int>& peak) : active_(active) {
    const int now = ++active_;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
  }
  ~ActiveCounter() { --active_; }

 private:
  std::atomic<int>& active_;
};

}  // namespace

MockAdapterServer::MockAdapterServer(Options options)
    : options_(std::move(options)), server_(std::make_unique<httplib::Server>()), embedder_(options_.embed_seed) {
  failures_left_ = options_.fail_first;

  auto handle = [this](const std::string& path) {
    return [this, path](const httplib::Request& req, httplib::Response& res) {
      ActiveCounter counter(active_, max_concurrent_);
      ++served_;
      if (options_.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(options_.delay_ms));
      if (failures_left_.fetch_sub(1) > 0) {
        res.status = 503;
        res.set_content(wire::error_body("unavailable", true, "injected failure").dump(), "application/json");
        return;
      }
      try {
        int frame_id = 0;
        const Json payload = wire::open_envelope(parse_text(req.body), frame_id);
        Json out;
        auto obs = [&] { return observation_from_rgb(wire::image_from_json(payload.at("image")), options_.palette, frame_id); };
        if (path == wire::kEmbed) {
          out = wire::embedding_payload(embedder_.embed_frame(obs()));
        } else if (path == wire::kSegment) {
          MockSegmenter seg(options_.segment_epsilon);
          out = wire::stack_payload(seg.segment_classes(obs(), payload.at("labels").get<std::vector<std::string>>(),
                                                        payload.at("background").get<std::vector<std::string>>()));
        } else if (path == wire::kSceneRisk) {
          const RobotModality modality = modality_from_json(payload.at("modality"));
          const CostTable prior = validate_cost_table(payload.at("prior"));
          out = Json{{"table", to_json(MockSceneRisk().infer_scene_risks(obs(), modality, prior))}};
        } else if (path == wire::kGoalPoint) {
          out = wire::goal_payload(MockGoalDetector().detect_goal_point(obs(), payload.at("goal_text").get<std::string>()));
        } else {
          const std::string reply = options_.select_reply ? options_.select_reply(payload)
                                                          : std::string("Reason: lowest combined cost\nColor: green");
          out = Json{{"reply", reply}};
        }
        res.status = 200;
        res.set_content(canonical_text(wire::envelope(frame_id, std::move(out))), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(wire::error_body("bad-request", false, e.what()).dump(), "application/json");
      }
    };
  };
  for (const char* path : {wire::kEmbed, wire::kSegment, wire::kSceneRisk, wire::kGoalPoint, wire::kSelectPath})
    server_->Post(path, handle(path));
  server_->Get(wire::kHealth, [](const httplib::Request&, httplib::Response& res) {
    res.set_content(Json{{"status", "ok"}, {"backend", "mock"}}.dump(), "application/json");
  });
}

MockAdapterServer::~MockAdapterServer() { stop(); }

int MockAdapterServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else {
    port_ = server_->bind_to_port("127.0.0.1", port) ? port : -1;
  }
  if (port_ <= 0) throw Error(ErrorCode::kIo, "mock adapter could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void MockAdapterServer::stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

std::string MockAdapterServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

}  // namespace catnav::providers
