#include "catnav/providers/protocol.hpp"

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"

namespace catnav::providers::wire {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad ") + what + ": " + e.what());
  }
}

}  // namespace

Json envelope(int frame_id, Json payload) {
  return Json{{"schema_version", kSchemaVersion}, {"frame_id", frame_id}, {"payload", std::move(payload)}};
}

Json open_envelope(const Json& doc, int& frame_id) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw Error(ErrorCode::kSchemaVersion, "message has no schema_version");
  check_schema_version(doc);
  return guarded("envelope", [&] {
    frame_id = doc.at("frame_id").get<int>();
    return doc.at("payload");
  });
}

Json error_body(const std::string& code, bool retryable, const std::string& detail) {
  return Json{{"code", code}, {"retryable", retryable}, {"detail", detail}};
}

Json image_to_json(const Image<Rgb>& rgb) { return Json{{"format", "ppm"}, {"b64", base64_encode(encode_ppm(rgb))}}; }

Image<Rgb> image_from_json(const Json& j) {
  return guarded("image", [&] {
    if (j.at("format").get<std::string>() != "ppm") throw Error(ErrorCode::kParseError, "unsupported image format");
    return decode_ppm(base64_decode(j.at("b64").get<std::string>()));
  });
}

Json embedding_payload(const Embedding& e) {
  const auto v = e.values();
  return Json{{"dim", v.size()}, {"values", std::vector<double>(v.begin(), v.end())}};
}

Embedding embedding_from_payload(const Json& j) {
  return guarded("embedding", [&] {
    const auto values = j.at("values").get<std::vector<double>>();
    return normalize_embedding(values);
  });
}

Json stack_payload(const costmap::ClassProbabilityStack& stack) {
  Json channels = Json::array();
  for (const auto& c : stack.channels())
    channels.push_back(
        {{"label", c.label}, {"background", c.background}, {"b64", base64_encode(pack_doubles(c.probability.data()))}});
  return Json{{"width", stack.width()}, {"height", stack.height()}, {"channels", std::move(channels)}};
}

costmap::ClassProbabilityStack stack_from_payload(const Json& j) {
  return guarded("segmentation", [&] {
    const int w = j.at("width").get<int>();
    const int h = j.at("height").get<int>();
    std::vector<costmap::ClassChannel> channels;
    for (const auto& c : j.at("channels")) {
      auto values = unpack_doubles(base64_decode(c.at("b64").get<std::string>()));
      if (values.size() != static_cast<std::size_t>(w) * h)
        throw Error(ErrorCode::kSizeMismatch, "channel size does not match width x height");
      Image<double> img(w, h);
      img.data() = std::move(values);
      channels.push_back({c.at("label").get<std::string>(), c.value("background", false), std::move(img)});
    }
    return costmap::ClassProbabilityStack::make(std::move(channels));
  });
}

Json goal_payload(const GoalPointResponse& g) {
  return Json{{"found", g.found}, {"u_norm", g.u_norm}, {"v_norm", g.v_norm}};
}

GoalPointResponse goal_from_payload(const Json& j) {
  return guarded("goal point", [&] {
    GoalPointResponse g;
    g.found = j.at("found").get<bool>();
    if (!g.found) return g;
    g.u_norm = j.at("u_norm").get<double>();
    g.v_norm = j.at("v_norm").get<double>();
    if (!(g.u_norm >= 0.0 && g.u_norm <= 1.0 && g.v_norm >= 0.0 && g.v_norm <= 1.0))
      throw Error(ErrorCode::kParseError, "goal point outside [0,1]");
    return g;
  });
}

Json select_request_payload(const reasoning::SelectionRequest& request) {
  Json legend = Json::array();
  for (const auto& e : request.overlay.legend)
    legend.push_back({{"label", planner::to_string(e.label)},
                      {"color", planner::color_name(e.label)},
                      {"off_view", e.off_view}});
  Json history = Json::array();
  for (const auto& h : request.history)
    history.push_back({{"prompt_digest", h.prompt_digest}, {"reply", reasoning::format_selection(h.result)}});
  return Json{{"image", image_to_json(request.overlay.pixels)},
              {"legend", std::move(legend)},
              {"modality", request.modality_text},
              {"behavior", request.behavior_text},
              {"history", std::move(history)}};
}

}  // namespace catnav::providers::wire
