#include "catnav/providers/transport.hpp"

#include <fstream>

#include <httplib.h>

#include "catnav/core/error.hpp"
#include "catnav/core/serialize.hpp"

namespace catnav::providers {

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {}

HttpResponse HttpTransport::post(const std::string& path, const std::string& body,
                                 const std::map<std::string, std::string>& headers, double timeout_s) {
  httplib::Client client(base_url_);
  if (!client.is_valid()) throw Error(ErrorCode::kProviderFailure, "invalid provider URL " + base_url_);
  const auto whole = std::chrono::duration<double>(timeout_s);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(whole);
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(path, h, body, "application/json");
  if (!res) throw Error(ErrorCode::kProviderFailure, "POST " + path + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

RecordingTransport::RecordingTransport(std::shared_ptr<Transport> inner, std::filesystem::path fixture)
    : inner_(std::move(inner)), fixture_(std::move(fixture)) {}

HttpResponse RecordingTransport::post(const std::string& path, const std::string& body,
                                      const std::map<std::string, std::string>& headers, double timeout_s) {
  HttpResponse res = inner_->post(path, body, headers, timeout_s);
  const Json line{{"path", path}, {"request", body}, {"status", res.status}, {"response", res.body}};
  std::lock_guard lock(mutex_);
  if (fixture_.has_parent_path()) std::filesystem::create_directories(fixture_.parent_path());
  std::ofstream out(fixture_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + fixture_.string());
  out << line.dump() << '\n';
  return res;
}

ReplayTransport::ReplayTransport(const std::filesystem::path& fixture) {
  std::ifstream in(fixture, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open fixture " + fixture.string());
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    const Json line = parse_text(text);
    try {
      recorded_[{line.at("path").get<std::string>(), line.at("request").get<std::string>()}].push_back(
          {line.at("status").get<int>(), line.at("response").get<std::string>()});
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("bad fixture line: ") + e.what());
    }
  }
}

HttpResponse ReplayTransport::post(const std::string& path, const std::string& body,
                                   const std::map<std::string, std::string>&, double) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(path, body);
  const auto it = recorded_.find(key);
  if (it == recorded_.end()) throw Error(ErrorCode::kProviderFailure, "no recorded response for " + path);
  std::size_t& next = cursor_[key];
  const HttpResponse& res = it->second[std::min(next, it->second.size() - 1)];
  ++next;
  return res;
}

}  // namespace catnav::providers
