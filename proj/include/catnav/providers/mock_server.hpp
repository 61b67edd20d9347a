#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "catnav/providers/mock.hpp"

namespace httplib {
class Server;
}

namespace catnav::providers {

/// In-process HTTP server speaking the adapter protocol with mock backends.
/// Frames are decoded back to classes through `palette`, so a remote round
/// trip matches the local mocks exactly.
class MockAdapterServer {
 public:
  struct Options {
    std::vector<PaletteEntry> palette;
    double segment_epsilon = 0.1;
    std::uint64_t embed_seed = 0x5eed;
    /// Reply for /select_path; defaults to choosing green.
    std::function<std::string(const Json& payload)> select_reply;
    /// Number of initial requests (any endpoint) answered with 503.
    int fail_first = 0;
    /// Artificial service time per request.
    int delay_ms = 0;
  };

  explicit MockAdapterServer(Options options);
  ~MockAdapterServer();

  MockAdapterServer(const MockAdapterServer&) = delete;
  MockAdapterServer& operator=(const MockAdapterServer&) = delete;

  /// Binds to 127.0.0.1 on `port` (0 picks a free port) and serves in a
  /// background thread. Returns the bound port.
  int start(int port = 0);
  void stop();
  std::string base_url() const;
  int requests_served() const { return served_.load(); }
  int max_concurrent() const { return max_concurrent_.load(); }

 private:
  Options options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  MockEmbedder embedder_;
  std::atomic<int> served_{0};
  std::atomic<int> failures_left_{0};
  std::atomic<int> active_{0};
  std::atomic<int> max_concurrent_{0};
};

}  // namespace catnav::providers
