#include "catnav/core/serialize.hpp"

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"

namespace catnav {

namespace {

double require_number(const Json& doc, const char* key, ErrorCode missing = ErrorCode::kMissingField) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) throw Error(missing, std::string("numeric field '") + key + "' required");
  return it->get<double>();
}

}  // namespace

std::string canonical_text(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void check_schema_version(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "expected an object");
  auto it = doc.find("schema_version");
  if (it != doc.end() && (!it->is_number_integer() || it->get<int>() != kSchemaVersion))
    throw Error(ErrorCode::kSchemaVersion, "unsupported schema_version " + it->dump());
}

CostTable validate_cost_table(const Json& raw, TableSource source) {
  check_schema_version(raw);
  auto entries_it = raw.find("entries");
  if (entries_it == raw.end() || !entries_it->is_array()) throw Error(ErrorCode::kMissingField, "'entries' array required");

  std::vector<RiskEntry> entries;
  for (const auto& item : *entries_it) {
    if (!item.is_object()) throw Error(ErrorCode::kParseError, "cost table entry must be an object");
    auto label = item.find("label");
    if (label == item.end() || !label->is_string()) throw Error(ErrorCode::kMissingField, "entry label required");
    RiskEntry e;
    e.label = label->get<std::string>();
    e.risk = require_number(item, "risk");
    if (auto c = item.find("curiosity"); c != item.end() && !c->is_null()) {
      if (!c->is_number()) throw Error(ErrorCode::kParseError, "curiosity must be numeric");
      e.curiosity = c->get<double>();
    }
    entries.push_back(std::move(e));
  }

  std::string description;
  for (const char* key : {"scene_description", "desc"}) {
    if (auto it = raw.find(key); it != raw.end() && it->is_string()) {
      description = it->get<std::string>();
      break;
    }
  }
  if (auto it = raw.find("source"); it != raw.end() && it->is_string()) source = parse_table_source(it->get<std::string>());
  return CostTable::make(std::move(entries), std::move(description), source);
}

Json to_json(const CostTable& table) {
  Json entries = Json::array();
  for (const auto& e : table.entries()) {
    Json item{{"label", e.label}, {"risk", e.risk}};
    if (e.curiosity) item["curiosity"] = *e.curiosity;
    entries.push_back(std::move(item));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"entries", std::move(entries)},
              {"scene_description", table.scene_description()},
              {"source", std::string(to_string(table.source()))}};
}

Json to_json(const Embedding& embedding) {
  return Json{{"dim", embedding.values().size()}, {"b64", base64_encode(pack_doubles(embedding.values()))}};
}

Embedding embedding_from_json(const Json& doc) {
  auto it = doc.find("b64");
  if (it == doc.end() || !it->is_string()) throw Error(ErrorCode::kMissingField, "embedding 'b64' required");
  return Embedding::from_unit(unpack_doubles(base64_decode(it->get<std::string>())));
}

Json to_json(const Pose2D& pose) { return Json{{"x", pose.x}, {"y", pose.y}, {"heading", pose.heading}}; }

Pose2D pose_from_json(const Json& doc) {
  return Pose2D{require_number(doc, "x"), require_number(doc, "y"), wrap_angle(require_number(doc, "heading"))};
}

Json to_json(const RobotModality& modality) {
  return Json{{"description", modality.description},
              {"footprint_radius", modality.footprint_radius},
              {"max_speed", modality.max_speed}};
}

RobotModality modality_from_json(const Json& doc) {
  RobotModality m;
  m.description = doc.value("description", std::string());
  m.footprint_radius = doc.value("footprint_radius", m.footprint_radius);
  m.max_speed = doc.value("max_speed", m.max_speed);
  validate(m);
  return m;
}

Json to_json(const CameraModel& c) {
  return Json{{"fx", c.fx},         {"fy", c.fy},         {"cx", c.cx},
              {"cy", c.cy},         {"width", c.width},   {"height", c.height},
              {"mount_height", c.mount_height}, {"pitch", c.pitch}};
}

CameraModel camera_from_json(const Json& doc) {
  CameraModel c;
  c.fx = doc.value("fx", c.fx);
  c.fy = doc.value("fy", c.fy);
  c.cx = doc.value("cx", c.cx);
  c.cy = doc.value("cy", c.cy);
  c.width = doc.value("width", c.width);
  c.height = doc.value("height", c.height);
  c.mount_height = doc.value("mount_height", c.mount_height);
  c.pitch = doc.value("pitch", c.pitch);
  validate(c);
  return c;
}

Json to_json(const BehaviorSpec& behavior) {
  return Json{{"text", behavior.text}, {"oracle_rule", to_string(behavior.rule)}};
}

BehaviorSpec behavior_from_json(const Json& doc) {
  BehaviorSpec b;
  b.text = doc.value("text", std::string());
  b.rule = parse_oracle_rule(doc.value("oracle_rule", std::string("none")));
  return b;
}

}  // namespace catnav
