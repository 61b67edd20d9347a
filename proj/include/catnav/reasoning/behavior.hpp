#pragma once

#include <string>
#include <vector>

#include "catnav/core/types.hpp"

namespace catnav::reasoning {

/// Ground truth that behavior rules are judged against.
class SceneTruth {
 public:
  virtual ~SceneTruth() = default;
  /// Terrain class under a world point ("" outside the scene).
  virtual std::string class_at(double x, double y) const = 0;
  /// Signed distance from the route centerline, positive to the left.
  virtual double lateral_offset(double x, double y) const = 0;
};

inline constexpr double kCenterBandHalfWidth = 0.5;

bool violates(const OracleRule& rule, const SceneTruth& truth, double x, double y);

/// Length of the polyline on which the rule is violated, by midpoint sampling
/// every `step` meters.
double violation_length(const std::vector<Pose2D>& path, const OracleRule& rule, const SceneTruth& truth,
                        double step = 0.01);

}  // namespace catnav::reasoning
