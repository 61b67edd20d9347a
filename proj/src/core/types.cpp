#include "catnav/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "catnav/core/error.hpp"

namespace catnav {

namespace {

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

// Cuts at a UTF-8 code point boundary so truncation never produces invalid text.
std::string truncate_utf8(std::string text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return text;
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  text.resize(cut);
  return text;
}

}  // namespace

void validate(const RobotModality& modality) {
  if (modality.description.empty())
    throw Error(ErrorCode::kInvalidArgument, "modality description is empty");
  if (!(modality.footprint_radius > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "footprint_radius must be > 0");
  if (!(modality.max_speed > 0.0)) throw Error(ErrorCode::kInvalidArgument, "max_speed must be > 0");
}

std::string_view to_string(TableSource source) {
  switch (source) {
    case TableSource::kFreshQuery: return "fresh_query";
    case TableSource::kCacheAggregate: return "cache_aggregate";
    case TableSource::kFixture: return "fixture";
  }
  return "fixture";
}

TableSource parse_table_source(std::string_view text) {
  if (text == "fresh_query") return TableSource::kFreshQuery;
  if (text == "cache_aggregate") return TableSource::kCacheAggregate;
  if (text == "fixture") return TableSource::kFixture;
  throw Error(ErrorCode::kParseError, "unknown table source '" + std::string(text) + "'");
}

std::string normalize_label(std::string_view raw) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
  if (raw.empty()) throw Error(ErrorCode::kInvalidLabel, "empty class label");
  std::string out(raw);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

CostTable CostTable::make(std::vector<RiskEntry> entries, std::string scene_description,
                          TableSource source) {
  for (auto& e : entries) {
    e.label = normalize_label(e.label);
    if (!in_unit_interval(e.risk))
      throw Error(ErrorCode::kRiskOutOfRange, "risk for '" + e.label + "' outside [0,1]");
    if (e.curiosity && !in_unit_interval(*e.curiosity))
      throw Error(ErrorCode::kRiskOutOfRange, "curiosity for '" + e.label + "' outside [0,1]");
  }
  std::sort(entries.begin(), entries.end(),
            [](const RiskEntry& a, const RiskEntry& b) { return a.label < b.label; });
  auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                [](const RiskEntry& a, const RiskEntry& b) { return a.label == b.label; });
  if (dup != entries.end()) throw Error(ErrorCode::kDuplicateLabel, "label '" + dup->label + "' repeated");

  CostTable table;
  table.entries_ = std::move(entries);
  table.scene_description_ = truncate_utf8(std::move(scene_description), kSceneDescriptionLimit);
  table.source_ = source;
  return table;
}

const RiskEntry* CostTable::find(std::string_view label) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                             [](const RiskEntry& e, std::string_view l) { return e.label < l; });
  if (it == entries_.end() || it->label != label) return nullptr;
  return &*it;
}

std::optional<double> CostTable::risk(std::string_view label) const {
  if (const auto* e = find(label)) return e->risk;
  return std::nullopt;
}

std::vector<std::string> CostTable::labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

CostTable CostTable::with_source(TableSource source) const {
  CostTable copy = *this;
  copy.source_ = source;
  return copy;
}

Embedding Embedding::from_unit(std::vector<double> values) {
  if (values.size() != kEmbeddingDim)
    throw Error(ErrorCode::kWrongDimension, "expected " + std::to_string(kEmbeddingDim) + " values, got " +
                                                std::to_string(values.size()));
  double sq = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNotNormalized, "non-finite embedding value");
    sq += v * v;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > 1e-6) throw Error(ErrorCode::kNotNormalized, "embedding is not unit-norm");
  return Embedding(std::make_shared<const std::vector<double>>(std::move(values)));
}

double Embedding::distance(const Embedding& other) const {
  const auto& a = *values_;
  const auto& b = *other.values_;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

Embedding normalize_embedding(std::span<const double> values) {
  if (values.size() != kEmbeddingDim)
    throw Error(ErrorCode::kWrongDimension, "expected " + std::to_string(kEmbeddingDim) + " values, got " +
                                                std::to_string(values.size()));
  // Scale by the max magnitude first so the squared sum cannot overflow or underflow.
  double max_abs = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite embedding value");
    max_abs = std::max(max_abs, std::abs(v));
  }
  if (max_abs == 0.0) throw Error(ErrorCode::kZeroVector, "cannot normalize the zero vector");
  long double sq = 0.0L;
  for (double v : values) {
    const long double s = static_cast<long double>(v) / max_abs;
    sq += s * s;
  }
  const long double norm = std::sqrt(sq) * max_abs;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = static_cast<double>(static_cast<long double>(values[i]) / norm);
  return Embedding(std::make_shared<const std::vector<double>>(std::move(out)));
}

double wrap_angle(double radians) {
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Pose2D make_pose(double x, double y, double heading) { return Pose2D{x, y, wrap_angle(heading)}; }

void validate(const CameraModel& camera) {
  if (!(camera.fx > 0.0) || !(camera.fy > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  if (camera.width <= 0 || camera.height <= 0)
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  if (!(camera.cx >= 0.0 && camera.cx < camera.width) || !(camera.cy >= 0.0 && camera.cy < camera.height))
    throw Error(ErrorCode::kInvalidArgument, "principal point outside the image");
  if (!(camera.mount_height > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mount_height must be > 0");
}

OracleRule parse_oracle_rule(std::string_view text) {
  OracleRule rule;
  if (text.empty() || text == "none") return rule;
  if (text == "stay_left_of_centerline") {
    rule.kind = OracleRule::Kind::kStayLeftOfCenterline;
  } else if (text == "stay_right_of_centerline") {
    rule.kind = OracleRule::Kind::kStayRightOfCenterline;
  } else if (text == "stay_center_band") {
    rule.kind = OracleRule::Kind::kStayCenterBand;
  } else if (text.starts_with("avoid_class:")) {
    rule.kind = OracleRule::Kind::kAvoidClass;
    rule.avoid_label = normalize_label(text.substr(std::string_view("avoid_class:").size()));
  } else {
    throw Error(ErrorCode::kUnknownRule, "unregistered oracle rule '" + std::string(text) + "'");
  }
  return rule;
}

std::string to_string(const OracleRule& rule) {
  switch (rule.kind) {
    case OracleRule::Kind::kNone: return "none";
    case OracleRule::Kind::kStayLeftOfCenterline: return "stay_left_of_centerline";
    case OracleRule::Kind::kStayRightOfCenterline: return "stay_right_of_centerline";
    case OracleRule::Kind::kStayCenterBand: return "stay_center_band";
    case OracleRule::Kind::kAvoidClass: return "avoid_class:" + rule.avoid_label;
  }
  return "none";
}

}  // namespace catnav
