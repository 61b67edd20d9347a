#pragma once

#include <string>

#include "catnav/core/serialize.hpp"
#include "catnav/costmap/pixel_costmap.hpp"
#include "catnav/providers/interfaces.hpp"

namespace catnav::providers::wire {

inline constexpr const char* kEmbed = "/embed";
inline constexpr const char* kSegment = "/segment";
inline constexpr const char* kSceneRisk = "/scene_risk";
inline constexpr const char* kGoalPoint = "/goal_point";
inline constexpr const char* kSelectPath = "/select_path";
inline constexpr const char* kHealth = "/health";

/// {schema_version, frame_id, payload}
Json envelope(int frame_id, Json payload);
/// Checks schema_version and returns the payload; `frame_id` receives the echo.
Json open_envelope(const Json& doc, int& frame_id);

Json error_body(const std::string& code, bool retryable, const std::string& detail);

Json image_to_json(const Image<Rgb>& rgb);
Image<Rgb> image_from_json(const Json& j);

Json embedding_payload(const Embedding& e);
Embedding embedding_from_payload(const Json& j);

Json stack_payload(const costmap::ClassProbabilityStack& stack);
costmap::ClassProbabilityStack stack_from_payload(const Json& j);

Json goal_payload(const GoalPointResponse& g);
GoalPointResponse goal_from_payload(const Json& j);

Json select_request_payload(const reasoning::SelectionRequest& request);

}  // namespace catnav::providers::wire
