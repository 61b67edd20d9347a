#include "catnav/core/error.hpp"
#include "catnav/planner/proposals.hpp"

namespace catnav::planner {

Json to_json(const PlannedPath& path) {
  Json waypoints = Json::array();
  for (const auto& w : path.waypoints) waypoints.push_back({w.x, w.y, w.heading});
  return Json{{"label", to_string(path.label)},
              {"color", {path.color[0], path.color[1], path.color[2]}},
              {"color_name", color_name(path.label)},
              {"total_length", path.total_length},
              {"accumulated_cost", path.accumulated_cost},
              {"waypoints", std::move(waypoints)}};
}

Json to_json(const ProposalSet& set) {
  Json proposals = Json::array();
  for (const auto& p : set.proposals) proposals.push_back(to_json(p));
  Json j{{"schema_version", kSchemaVersion}, {"frame_id", set.frame_id}, {"proposals", std::move(proposals)}};
  if (!set.diagnostic.empty()) j["diagnostic"] = set.diagnostic;
  return j;
}

PlannedPath planned_path_from_json(const Json& j) {
  try {
    PlannedPath path;
    const auto label = parse_proposal_label(j.at("label").get<std::string>());
    if (!label) throw Error(ErrorCode::kParseError, "unknown proposal label");
    path.label = *label;
    const auto& color = j.at("color");
    path.color = {color.at(0).get<std::uint8_t>(), color.at(1).get<std::uint8_t>(), color.at(2).get<std::uint8_t>()};
    path.total_length = j.at("total_length").get<double>();
    path.accumulated_cost = j.at("accumulated_cost").get<double>();
    for (const auto& w : j.at("waypoints"))
      path.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>()});
    return path;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad planned path: ") + e.what());
  }
}

ProposalSet proposal_set_from_json(const Json& j) {
  check_schema_version(j);
  ProposalSet set;
  try {
    set.frame_id = j.at("frame_id").get<int>();
    for (const auto& p : j.at("proposals")) set.proposals.push_back(planned_path_from_json(p));
    if (j.contains("diagnostic")) set.diagnostic = j.at("diagnostic").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad proposal set: ") + e.what());
  }
  return set;
}

}  // namespace catnav::planner
