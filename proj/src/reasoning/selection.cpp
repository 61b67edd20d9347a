#include "catnav/reasoning/selection.hpp"

#include <algorithm>
#include <cctype>

#include "catnav/core/error.hpp"

namespace catnav::reasoning {

namespace {

using planner::ProposalLabel;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  auto junk = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);
  return s;
}

// "key: value" with optional markdown decoration around the key.
std::optional<std::string_view> field(std::string_view line, std::string_view key) {
  while (!line.empty() && std::string_view("*#->`_ \t").find(line.front()) != std::string_view::npos)
    line.remove_prefix(1);
  if (line.size() < key.size() || lower(line.substr(0, key.size())) != key) return std::nullopt;
  line.remove_prefix(key.size());
  while (!line.empty() && (line.front() == '*' || line.front() == '_' || line.front() == ' ')) line.remove_prefix(1);
  if (line.empty() || line.front() != ':') return std::nullopt;
  line.remove_prefix(1);
  while (!line.empty() && (line.front() == '*' || line.front() == '_')) line.remove_prefix(1);
  return trim(line);
}

std::string first_word(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  std::string word;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) word += s[i++];
  return lower(word);
}

SelectionResult fallback(const planner::ProposalSet& set) {
  SelectionResult r;
  r.frame_id = set.frame_id;
  r.reason = std::string(kParseFailure);
  r.fallback = true;
  for (auto label : planner::kLabelPrecedence) {
    if (set.find(label)) {
      r.choice = label;
      break;
    }
  }
  return r;
}

}  // namespace

SelectionResult parse_selection(std::string_view reply, const planner::ProposalSet& submitted) {
  std::optional<std::string> reason;
  std::optional<std::string> color;
  while (!reply.empty()) {
    const std::size_t nl = reply.find('\n');
    const std::string_view line = trim(reply.substr(0, nl));
    reply.remove_prefix(nl == std::string_view::npos ? reply.size() : nl + 1);
    if (!reason) {
      if (auto v = field(line, "reason")) {
        reason = std::string(*v);
        continue;
      }
    }
    if (!color) {
      auto v = field(line, "color");
      if (!v) v = field(line, "colour");
      if (v) color = first_word(*v);
    }
  }
  if (!color) return fallback(submitted);

  SelectionResult r;
  r.frame_id = submitted.frame_id;
  r.reason = reason.value_or("");
  if (*color == "none") return r;
  const auto label = planner::label_for_color(*color);
  if (!label || !submitted.find(*label)) return fallback(submitted);
  r.choice = label;
  return r;
}

std::string format_selection(const SelectionResult& result) {
  const std::string_view color = result.choice ? planner::color_name(*result.choice) : "none";
  return "Reason: " + result.reason + "\nColor: " + std::string(color);
}

SelectionResult cost_argmin(const planner::ProposalSet& set, std::string reason) {
  SelectionResult r;
  r.frame_id = set.frame_id;
  r.reason = std::move(reason);
  const planner::PlannedPath* best = nullptr;
  for (const auto& p : set.proposals) {
    if (!best || p.accumulated_cost < best->accumulated_cost ||
        (p.accumulated_cost == best->accumulated_cost && planner::precedence(p.label) < planner::precedence(best->label)))
      best = &p;
  }
  if (best) r.choice = best->label;
  return r;
}

Json to_json(const SelectionResult& result) {
  return Json{{"choice", result.choice ? std::string(planner::to_string(*result.choice)) : "none"},
              {"color", result.choice ? std::string(planner::color_name(*result.choice)) : "none"},
              {"reason", result.reason},
              {"frame_id", result.frame_id},
              {"fallback", result.fallback}};
}

SelectionResult selection_from_json(const Json& j) {
  try {
    SelectionResult r;
    const auto choice = j.at("choice").get<std::string>();
    if (choice != "none") {
      r.choice = planner::parse_proposal_label(choice);
      if (!r.choice) throw Error(ErrorCode::kParseError, "unknown choice '" + choice + "'");
    }
    r.reason = j.at("reason").get<std::string>();
    r.frame_id = j.at("frame_id").get<int>();
    r.fallback = j.value("fallback", false);
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad selection: ") + e.what());
  }
}

}  // namespace catnav::reasoning
