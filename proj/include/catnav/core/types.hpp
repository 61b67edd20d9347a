#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace catnav {

/// Robot embodiment injected into provider prompts.
struct RobotModality {
  std::string description;
  double footprint_radius = 0.3;  // m
  double max_speed = 0.75;        // m/s
};

void validate(const RobotModality& modality);

struct RiskEntry {
  std::string label;
  double risk = 0.0;
  std::optional<double> curiosity;

  friend bool operator==(const RiskEntry&, const RiskEntry&) = default;
};

enum class TableSource { kFreshQuery, kCacheAggregate, kFixture };

std::string_view to_string(TableSource source);
TableSource parse_table_source(std::string_view text);

/// Lowercases and trims a class label. Throws kInvalidLabel when nothing is left.
std::string normalize_label(std::string_view raw);

inline constexpr std::size_t kSceneDescriptionLimit = 40;

/// Class label -> traversal risk table. Entries are kept sorted by label and
/// labels are unique; construction goes through make() which enforces that.
class CostTable {
 public:
  CostTable() = default;

  static CostTable make(std::vector<RiskEntry> entries, std::string scene_description,
                        TableSource source);

  const std::vector<RiskEntry>& entries() const noexcept { return entries_; }
  const std::string& scene_description() const noexcept { return scene_description_; }
  TableSource source() const noexcept { return source_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const RiskEntry* find(std::string_view label) const;
  std::optional<double> risk(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label) != nullptr; }
  std::vector<std::string> labels() const;

  CostTable with_source(TableSource source) const;

  friend bool operator==(const CostTable&, const CostTable&) = default;

 private:
  std::vector<RiskEntry> entries_;
  std::string scene_description_;
  TableSource source_ = TableSource::kFixture;
};

inline constexpr std::size_t kEmbeddingDim = 768;

/// Unit-norm image embedding. Storage is shared and immutable so copies are cheap.
class Embedding {
 public:
  /// Wraps values that are already unit-norm (within 1e-6). Used when loading
  /// snapshots so that stored bits are preserved exactly.
  static Embedding from_unit(std::vector<double> values);

  std::span<const double> values() const noexcept { return *values_; }
  double distance(const Embedding& other) const;

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return *a.values_ == *b.values_;
  }

 private:
  explicit Embedding(std::shared_ptr<const std::vector<double>> values)
      : values_(std::move(values)) {}
  friend Embedding normalize_embedding(std::span<const double> values);

  std::shared_ptr<const std::vector<double>> values_;
};

Embedding normalize_embedding(std::span<const double> values);

double wrap_angle(double radians);

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // (-pi, pi]

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

Pose2D make_pose(double x, double y, double heading);

/// Pinhole camera rigidly mounted on the robot, looking along the robot's +x
/// axis and pitched down by `pitch` radians.
struct CameraModel {
  double fx = 32.0;
  double fy = 32.0;
  double cx = 32.0;
  double cy = 24.0;
  int width = 64;
  int height = 48;
  double mount_height = 0.5;
  double pitch = 0.45;
};

void validate(const CameraModel& camera);

struct OracleRule {
  enum class Kind { kNone, kStayLeftOfCenterline, kStayRightOfCenterline, kStayCenterBand, kAvoidClass };
  Kind kind = Kind::kNone;
  std::string avoid_label;

  friend bool operator==(const OracleRule&, const OracleRule&) = default;
};

OracleRule parse_oracle_rule(std::string_view text);
std::string to_string(const OracleRule& rule);

struct BehaviorSpec {
  std::string text;
  OracleRule rule;
};

}  // namespace catnav
