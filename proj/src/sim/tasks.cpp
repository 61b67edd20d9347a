#include "catnav/sim/tasks.hpp"

#include "catnav/core/error.hpp"
#include "catnav/core/random.hpp"
#include "catnav/providers/mock.hpp"

namespace catnav::sim {

namespace {

struct PaletteSpec {
  const char* label;
  Rgb color;
  double height;
};

constexpr PaletteSpec kPalette[] = {
    {"pavement", {128, 128, 128}, 0.0}, {"grass", {60, 160, 60}, 0.0},   {"floor", {200, 190, 170}, 0.0},
    {"paper", {250, 250, 250}, 0.0},    {"gravel", {170, 150, 120}, 0.0}, {"marker", {255, 0, 255}, 0.0},
    {"wall", {150, 80, 60}, 1.5},       {"tree", {20, 90, 20}, 3.0},      {"bench", {140, 100, 50}, 0.5},
    {"person", {220, 60, 160}, 1.7},
};

const RobotModality kWheeled{"small wheeled delivery robot, 0.6 m wide, cannot climb curbs", 0.3, 0.75};

Scene base(const std::string& name, double x0, double y0, double w, double h, const std::string& ground) {
  Scene s;
  s.name = name;
  s.x_min = x0;
  s.y_min = y0;
  s.width_m = w;
  s.height_m = h;
  s.base_label = ground;
  s.classes = default_palette();
  s.modality = kWheeled;
  return s;
}

void tree_rows(Scene& s, Rng& rng, double x_end, double y) {
  for (double x = 2.0; x < x_end; x += 4.0) {
    const double cx = x + rng.uniform(-0.8, 0.8);
    s.patches.push_back({"tree", cx - 0.2, cx + 0.2, y - 0.2, y + 0.2});
  }
}

Scene footpath(const std::string& name, Rng& rng, double half_width, double lane_y) {
  Scene s = base(name, -3.0, -6.0, 27.0, 12.0, "grass");
  s.patches.push_back({"pavement", -3.0, 24.0, -half_width, half_width});
  tree_rows(s, rng, 22.0, 4.5);
  tree_rows(s, rng, 22.0, -4.5);
  s.start = make_pose(0.0, lane_y, 0.0);
  s.goal = make_pose(20.0, lane_y, 0.0);
  s.centerline = {{-3.0, 0.0}, {24.0, 0.0}};
  return s;
}

}  // namespace

std::vector<SceneClass> default_palette() {
  const auto risks = providers::default_risk_fixtures();
  std::vector<SceneClass> out;
  for (const auto& p : kPalette) out.push_back({p.label, p.color, risks.at(p.label), p.height});
  return out;
}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"footpath-right", "footpath-center", "human-crossing", "bench-field",
                                                 "paper-indoor"};
  return names;
}

Scene make_task(std::string_view name, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x7a5c));
  Scene s;
  if (name == "footpath-right") {
    s = footpath(std::string(name), rng, 2.0, -1.0);
    const double bx = rng.uniform(7.0, 12.0);
    s.patches.push_back({"bench", bx, bx + 1.5, 0.6, 1.1});
    s.behavior = {"keep to the right side of the footpath", parse_oracle_rule("stay_right_of_centerline")};
  } else if (name == "footpath-center") {
    s = footpath(std::string(name), rng, 1.25, 0.0);
    for (int i = 0; i < 3; ++i) {
      const double bx = 3.0 + 6.0 * i + rng.uniform(0.0, 3.0);
      const double by = i % 2 == 0 ? 2.0 : -2.5;
      s.patches.push_back({"bench", bx, bx + 1.5, by, by + 0.5});
    }
    s.behavior = {"stay in the middle of the footpath", parse_oracle_rule("stay_center_band")};
  } else if (name == "human-crossing") {
    s = base(std::string(name), -3.0, -6.0, 24.0, 12.0, "grass");
    s.patches.push_back({"pavement", -3.0, 21.0, -2.0, 2.0});
    tree_rows(s, rng, 18.0, 4.5);
    tree_rows(s, rng, 18.0, -4.5);
    Agent person;
    const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
    person.speed = rng.uniform(0.9, 1.2);
    person.trigger_x = 4.0;
    person.waypoints = {{8.5, 3.0 * side}, {8.5, -3.5 * side}};
    s.agents.push_back(person);
    s.start = make_pose(0.0, 0.0, 0.0);
    s.goal = make_pose(17.0, 0.0, 0.0);
    s.centerline = {{-3.0, 0.0}, {21.0, 0.0}};
    s.behavior = {"yield to pedestrians crossing the path", parse_oracle_rule("none")};
  } else if (name == "bench-field") {
    s = base(std::string(name), -3.0, -7.0, 25.0, 14.0, "grass");
    for (int i = 0; i < 7; ++i) {
      const double bx = rng.uniform(3.0, 16.0), by = rng.uniform(-5.0, 4.5);
      s.patches.push_back({"bench", bx, bx + 0.5, by, by + 1.5});
    }
    const double gy = rng.uniform(-2.0, 2.0);
    s.patches.push_back({"marker", 17.6, 18.4, gy - 0.4, gy + 0.4});
    s.start = make_pose(0.0, 0.0, 0.0);
    s.goal = make_pose(18.0, gy, 0.0);
    s.goal_label = "marker";
    s.search_hint = make_pose(18.0, 0.0, 0.0);
    s.centerline = {{-3.0, 0.0}, {22.0, 0.0}};
    s.behavior = {"reach the marker on the lawn without touching the benches", parse_oracle_rule("avoid_class:bench")};
  } else if (name == "paper-indoor") {
    s = base(std::string(name), -2.0, -3.5, 16.0, 7.0, "floor");
    s.patches.push_back({"wall", -2.0, 14.0, -3.5, -3.2});
    s.patches.push_back({"wall", -2.0, 14.0, 3.2, 3.5});
    s.patches.push_back({"wall", -2.0, -1.7, -3.5, 3.5});
    s.patches.push_back({"wall", 13.7, 14.0, -3.5, 3.5});
    const double px = rng.uniform(4.0, 7.0), py = rng.uniform(-0.1, 0.1);
    s.patches.push_back({"paper", px, px + 1.2, py - 0.25, py + 0.25});
    s.start = make_pose(0.0, 0.0, 0.0);
    s.goal = make_pose(12.0, 0.0, 0.0);
    s.centerline = {{-2.0, 0.0}, {14.0, 0.0}};
    s.behavior = {"avoid walking over the paper on the floor", parse_oracle_rule("avoid_class:paper")};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown task '" + std::string(name) + "'");
  }
  s.build();
  return s;
}

}  // namespace catnav::sim
