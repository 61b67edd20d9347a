#include "catnav/planner/types.hpp"

#include <cctype>
#include <cmath>

#include "catnav/core/error.hpp"

namespace catnav::planner {

void validate(const TrrtConfig& c) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(c.step_size)) throw Error(ErrorCode::kInvalidArgument, "step_size must be > 0");
  if (c.max_iterations <= 0) throw Error(ErrorCode::kInvalidArgument, "max_iterations must be > 0");
  if (!(c.goal_bias >= 0.0 && c.goal_bias < 1.0)) throw Error(ErrorCode::kInvalidArgument, "goal_bias must be in [0,1)");
  if (!positive(c.temperature)) throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  if (!(c.temp_increase_rate > 1.0)) throw Error(ErrorCode::kInvalidArgument, "temp_increase_rate must be > 1");
  if (c.n_fail_max <= 0) throw Error(ErrorCode::kInvalidArgument, "nFail_max must be > 0");
  if (!positive(c.cost_scale)) throw Error(ErrorCode::kInvalidArgument, "cost_scale must be > 0");
  if (!(c.cost_ceiling >= 0.0 && c.cost_ceiling <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "cost_ceiling must be in [0,1]");
  if (!(c.unknown_cost >= 0.0 && c.unknown_cost <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "unknown_cost must be in [0,1]");
  if (!(c.footprint_radius >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "footprint_radius must be >= 0");
  if (!positive(c.resample_spacing)) throw Error(ErrorCode::kInvalidArgument, "resample_spacing must be > 0");
  if (!(c.offset >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "offset must be >= 0");
  if (!(c.offset_shrink > 0.0 && c.offset_shrink < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "offset_shrink must be in (0,1)");
  if (!(c.risky_length_ratio > 0.0)) throw Error(ErrorCode::kInvalidArgument, "risky_length_ratio must be > 0");
}

std::string_view to_string(ProposalLabel label) {
  switch (label) {
    case ProposalLabel::kCenter: return "center";
    case ProposalLabel::kLeft: return "left";
    case ProposalLabel::kRight: return "right";
    case ProposalLabel::kRisky: return "risky";
  }
  return "center";
}

std::optional<ProposalLabel> parse_proposal_label(std::string_view text) {
  for (auto label : kLabelPrecedence)
    if (to_string(label) == text) return label;
  return std::nullopt;
}

std::string_view color_name(ProposalLabel label) {
  switch (label) {
    case ProposalLabel::kCenter: return "green";
    case ProposalLabel::kLeft: return "blue";
    case ProposalLabel::kRight: return "yellow";
    case ProposalLabel::kRisky: return "red";
  }
  return "green";
}

std::optional<ProposalLabel> label_for_color(std::string_view word) {
  std::string lower(word);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  for (auto label : kLabelPrecedence)
    if (color_name(label) == lower) return label;
  return std::nullopt;
}

Rgb palette_color(ProposalLabel label) {
  switch (label) {
    case ProposalLabel::kCenter: return {0, 200, 0};
    case ProposalLabel::kLeft: return {0, 90, 255};
    case ProposalLabel::kRight: return {255, 220, 0};
    case ProposalLabel::kRisky: return {230, 0, 0};
  }
  return {0, 200, 0};
}

int precedence(ProposalLabel label) { return static_cast<int>(label); }

double polyline_length(const std::vector<Pose2D>& w) {
  double total = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) total += std::hypot(w[i].x - w[i - 1].x, w[i].y - w[i - 1].y);
  return total;
}

void assign_headings(std::vector<Pose2D>& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double dx = w[i].x - w[i - 1].x;
    const double dy = w[i].y - w[i - 1].y;
    w[i].heading = (dx != 0.0 || dy != 0.0) ? std::atan2(dy, dx) : w[i - 1].heading;
  }
}

const PlannedPath* ProposalSet::find(ProposalLabel label) const {
  for (const auto& p : proposals)
    if (p.label == label) return &p;
  return nullptr;
}

}  // namespace catnav::planner
