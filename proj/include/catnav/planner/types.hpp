#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/core/types.hpp"

namespace catnav::planner {

struct TrrtConfig {
  double step_size = 0.3;
  int max_iterations = 5000;
  double goal_bias = 0.1;
  double temperature = 0.02;
  double temp_increase_rate = 2.0;
  int n_fail_max = 10;
  double cost_scale = 1.0;  // K_B
  double cost_ceiling = 0.5;
  std::uint64_t rng_seed = 1;
  bool adaptive_temperature = true;

  double unknown_cost = 0.2;
  double footprint_radius = 0.3;
  double resample_spacing = 0.25;
  int shortcut_attempts = 80;
  double shortcut_cost_slack = 0.01;

  double offset = 0.6;
  double offset_shrink = 0.5;
  double min_offset = 0.05;
  double offset_ramp = 1.0;
  double risky_ceiling_increase = 0.3;
  double risky_length_ratio = 0.7;
  double duplicate_tolerance = 0.05;
};

void validate(const TrrtConfig& config);

enum class ProposalLabel : std::uint8_t { kCenter, kLeft, kRight, kRisky };

inline constexpr std::array<ProposalLabel, 4> kLabelPrecedence = {ProposalLabel::kCenter, ProposalLabel::kLeft,
                                                                  ProposalLabel::kRight, ProposalLabel::kRisky};

std::string_view to_string(ProposalLabel label);
std::optional<ProposalLabel> parse_proposal_label(std::string_view text);
/// Color word shown to the selector: green, blue, yellow, red.
std::string_view color_name(ProposalLabel label);
std::optional<ProposalLabel> label_for_color(std::string_view color_word);
Rgb palette_color(ProposalLabel label);
int precedence(ProposalLabel label);

struct PlannedPath {
  std::vector<Pose2D> waypoints;
  double total_length = 0.0;
  double accumulated_cost = 0.0;
  ProposalLabel label = ProposalLabel::kCenter;
  Rgb color = palette_color(ProposalLabel::kCenter);
};

double polyline_length(const std::vector<Pose2D>& waypoints);

/// Sets each waypoint's heading to its incoming segment direction. The first
/// waypoint (the robot pose) is left untouched.
void assign_headings(std::vector<Pose2D>& waypoints);

struct ProposalSet {
  std::vector<PlannedPath> proposals;  // precedence order
  int frame_id = 0;
  std::string diagnostic;

  const PlannedPath* find(ProposalLabel label) const;
  bool empty() const noexcept { return proposals.empty(); }
};

}  // namespace catnav::planner
