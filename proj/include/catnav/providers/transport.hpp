#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace catnav::providers {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// One POST per call. Implementations must be safe for concurrent use and
/// throw catnav::Error(kProviderFailure) when no response is received.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& body,
                            const std::map<std::string, std::string>& headers, double timeout_s) = 0;
};

/// Plain-HTTP transport over cpp-httplib; `base_url` is "http://host:port".
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string base_url);
  HttpResponse post(const std::string& path, const std::string& body,
                    const std::map<std::string, std::string>& headers, double timeout_s) override;

 private:
  std::string base_url_;
};

/// Forwards to an inner transport and appends each exchange to a fixture
/// file (one JSON document per line). Headers are never recorded.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(std::shared_ptr<Transport> inner, std::filesystem::path fixture);
  HttpResponse post(const std::string& path, const std::string& body,
                    const std::map<std::string, std::string>& headers, double timeout_s) override;

 private:
  std::shared_ptr<Transport> inner_;
  std::filesystem::path fixture_;
  std::mutex mutex_;
};

/// Serves responses from a fixture file keyed by (path, request body).
/// Repeated identical requests are answered in recorded order, then the last
/// recording repeats. Unknown requests throw kProviderFailure.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(const std::filesystem::path& fixture);
  HttpResponse post(const std::string& path, const std::string& body,
                    const std::map<std::string, std::string>& headers, double timeout_s) override;
  std::size_t size() const { return recorded_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<HttpResponse>> recorded_;
  std::map<std::pair<std::string, std::string>, std::size_t> cursor_;
  std::mutex mutex_;
};

}  // namespace catnav::providers
