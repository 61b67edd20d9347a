#include "catnav/reasoning/behavior.hpp"

#include <cmath>

namespace catnav::reasoning {

bool violates(const OracleRule& rule, const SceneTruth& truth, double x, double y) {
  switch (rule.kind) {
    case OracleRule::Kind::kNone: return false;
    case OracleRule::Kind::kStayLeftOfCenterline: return truth.lateral_offset(x, y) < 0.0;
    case OracleRule::Kind::kStayRightOfCenterline: return truth.lateral_offset(x, y) > 0.0;
    case OracleRule::Kind::kStayCenterBand: return std::abs(truth.lateral_offset(x, y)) > kCenterBandHalfWidth;
    case OracleRule::Kind::kAvoidClass: return truth.class_at(x, y) == rule.avoid_label;
  }
  return false;
}

double violation_length(const std::vector<Pose2D>& path, const OracleRule& rule, const SceneTruth& truth,
                        double step) {
  if (rule.kind == OracleRule::Kind::kNone) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Pose2D& a = path[i - 1];
    const Pose2D& b = path[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int k = 0; k < n; ++k) {
      const double t = (k + 0.5) / n;
      if (violates(rule, truth, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))) total += len / n;
    }
  }
  return total;
}

}  // namespace catnav::reasoning
