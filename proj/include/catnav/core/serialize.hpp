#pragma once

#include <string>

#include <json.hpp>

#include "catnav/core/types.hpp"

namespace catnav {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Canonical structured text: sorted keys, two-space indent, trailing newline.
std::string canonical_text(const Json& doc);
Json parse_text(const std::string& text);

/// Throws kSchemaVersion if `doc` carries a schema_version other than ours.
void check_schema_version(const Json& doc);

/// Builds a CostTable from a parsed provider response. Labels are normalized,
/// risks outside [0,1] are rejected (never clamped). `source` is used unless
/// the document names one itself.
CostTable validate_cost_table(const Json& raw, TableSource source = TableSource::kFreshQuery);
Json to_json(const CostTable& table);

Json to_json(const Embedding& embedding);
Embedding embedding_from_json(const Json& doc);

Json to_json(const Pose2D& pose);
Pose2D pose_from_json(const Json& doc);

Json to_json(const RobotModality& modality);
RobotModality modality_from_json(const Json& doc);

Json to_json(const CameraModel& camera);
CameraModel camera_from_json(const Json& doc);

Json to_json(const BehaviorSpec& behavior);
BehaviorSpec behavior_from_json(const Json& doc);

}  // namespace catnav
