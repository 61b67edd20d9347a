#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "catnav/core/serialize.hpp"
#include "catnav/planner/types.hpp"

namespace catnav::reasoning {

struct SelectionResult {
  std::optional<planner::ProposalLabel> choice;  // nullopt means "none"
  std::string reason;
  int frame_id = 0;
  bool fallback = false;

  friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

inline constexpr std::string_view kParseFailure = "parse-failure";

/// Parses a "Reason: ... / Color: ..." reply against the submitted set. Never
/// throws: unusable replies fall back to the center proposal (or the first
/// available by precedence) with reason "parse-failure".
SelectionResult parse_selection(std::string_view reply, const planner::ProposalSet& submitted);

/// Two-line reply text for a result ("Color: none" when there is no choice).
std::string format_selection(const SelectionResult& result);

/// Lowest accumulated cost, ties by label precedence; none for an empty set.
SelectionResult cost_argmin(const planner::ProposalSet& set, std::string reason);

Json to_json(const SelectionResult& result);
SelectionResult selection_from_json(const Json& j);

}  // namespace catnav::reasoning
