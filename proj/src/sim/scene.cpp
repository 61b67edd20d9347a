#include "catnav/sim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "catnav/core/error.hpp"

namespace catnav::sim {

std::array<double, 2> agent_position(const Agent& agent, double elapsed) {
  if (agent.waypoints.empty()) throw Error(ErrorCode::kInvalidArgument, "agent has no waypoints");
  double remaining = std::max(0.0, elapsed) * agent.speed;
  for (std::size_t i = 0; i + 1 < agent.waypoints.size(); ++i) {
    const auto& a = agent.waypoints[i];
    const auto& b = agent.waypoints[i + 1];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (remaining <= len && len > 0.0) {
      const double f = remaining / len;
      return {a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])};
    }
    remaining -= len;
  }
  return agent.waypoints.back();
}

void Scene::build() {
  if (!(resolution > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scene resolution must be positive");
  if (!(width_m > 0.0) || !(height_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scene extent must be positive");
  if (classes.empty()) throw Error(ErrorCode::kInvalidArgument, "scene has no classes");
  std::set<std::string> seen;
  for (auto& c : classes) {
    c.label = normalize_label(c.label);
    if (!seen.insert(c.label).second) throw Error(ErrorCode::kDuplicateLabel, "scene class '" + c.label + "' repeated");
    if (!(c.risk >= 0.0 && c.risk <= 1.0)) throw Error(ErrorCode::kRiskOutOfRange, "risk of '" + c.label + "'");
    if (!(c.height >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative height for '" + c.label + "'");
  }
  validate(modality);
  for (const auto& a : agents) {
    class_index(a.label);
    if (a.waypoints.empty()) throw Error(ErrorCode::kInvalidArgument, "agent has no waypoints");
    if (!(a.radius > 0.0) || !(a.speed >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "bad agent geometry");
  }
  if (goal_label) class_index(*goal_label);

  width_ = static_cast<int>(std::lround(width_m / resolution));
  height_ = static_cast<int>(std::lround(height_m / resolution));
  cells_.assign(static_cast<std::size_t>(width_) * height_, class_index(base_label));
  for (const auto& p : patches) {
    const int cls = class_index(p.label);
    for (int iy = 0; iy < height_; ++iy) {
      const double cy = y_min + (iy + 0.5) * resolution;
      if (cy < p.y0 || cy >= p.y1) continue;
      for (int ix = 0; ix < width_; ++ix) {
        const double cx = x_min + (ix + 0.5) * resolution;
        if (cx >= p.x0 && cx < p.x1) cells_[static_cast<std::size_t>(iy) * width_ + ix] = cls;
      }
    }
  }
  const auto [sx, sy] = cell_of(start.x, start.y);
  if (!contains_cell(sx, sy)) throw Error(ErrorCode::kInvalidArgument, "start lies outside the scene");
}

std::array<int, 2> Scene::cell_of(double x, double y) const {
  return {static_cast<int>(std::floor((x - x_min) / resolution)), static_cast<int>(std::floor((y - y_min) / resolution))};
}

std::optional<int> Scene::class_at(double x, double y) const {
  const auto [ix, iy] = cell_of(x, y);
  if (!contains_cell(ix, iy)) return std::nullopt;
  return class_at_cell(ix, iy);
}

int Scene::class_index(const std::string& label) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].label == label) return static_cast<int>(i);
  throw Error(ErrorCode::kInvalidLabel, "class '" + label + "' missing from the scene palette");
}

std::vector<std::string> Scene::class_names() const {
  std::vector<std::string> out;
  for (const auto& c : classes) out.push_back(c.label);
  return out;
}

double Scene::lateral_offset(double x, double y) const {
  if (centerline.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  double signed_best = 0.0;
  for (std::size_t i = 0; i + 1 < centerline.size(); ++i) {
    const double ax = centerline[i][0], ay = centerline[i][1];
    const double dx = centerline[i + 1][0] - ax, dy = centerline[i + 1][1] - ay;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) continue;
    const double t = std::clamp(((x - ax) * dx + (y - ay) * dy) / len2, 0.0, 1.0);
    const double d = std::hypot(x - (ax + t * dx), y - (ay + t * dy));
    if (d < best) {
      best = d;
      const double cross = dx * (y - ay) - dy * (x - ax);
      signed_best = cross >= 0.0 ? d : -d;
    }
  }
  return signed_best;
}

std::string SceneTruthView::class_at(double x, double y) const {
  const auto c = scene_->class_at(x, y);
  return c ? scene_->classes[*c].label : std::string();
}

namespace {

Json point_list(const std::vector<std::array<double, 2>>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back({p[0], p[1]});
  return out;
}

std::vector<std::array<double, 2>> points_from(const Json& j) {
  std::vector<std::array<double, 2>> out;
  for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

}  // namespace

Json to_json(const Scene& scene) {
  Json classes = Json::array();
  for (const auto& c : scene.classes)
    classes.push_back({{"label", c.label}, {"color", {c.color[0], c.color[1], c.color[2]}}, {"risk", c.risk}, {"height", c.height}});
  Json patches = Json::array();
  for (const auto& p : scene.patches)
    patches.push_back({{"label", p.label}, {"x0", p.x0}, {"x1", p.x1}, {"y0", p.y0}, {"y1", p.y1}});
  Json agents = Json::array();
  for (const auto& a : scene.agents) {
    Json j{{"label", a.label}, {"radius", a.radius}, {"height", a.height}, {"speed", a.speed},
           {"waypoints", point_list(a.waypoints)}};
    if (a.trigger_x) j["trigger_x"] = *a.trigger_x;
    agents.push_back(j);
  }
  Json doc{{"schema_version", kSchemaVersion},
           {"name", scene.name},
           {"bounds", {{"x_min", scene.x_min}, {"y_min", scene.y_min}, {"width", scene.width_m}, {"height", scene.height_m}}},
           {"resolution", scene.resolution},
           {"base", scene.base_label},
           {"classes", classes},
           {"patches", patches},
           {"agents", agents},
           {"start", to_json(scene.start)},
           {"goal", to_json(scene.goal)},
           {"behavior", to_json(scene.behavior)},
           {"modality", to_json(scene.modality)},
           {"centerline", point_list(scene.centerline)}};
  if (scene.goal_label) doc["goal_label"] = *scene.goal_label;
  if (scene.search_hint) doc["search_hint"] = to_json(*scene.search_hint);
  return doc;
}

Scene scene_from_json(const Json& doc) {
  check_schema_version(doc);
  try {
    Scene s;
    s.name = doc.value("name", std::string("scene"));
    const auto& b = doc.at("bounds");
    s.x_min = b.at("x_min").get<double>();
    s.y_min = b.at("y_min").get<double>();
    s.width_m = b.at("width").get<double>();
    s.height_m = b.at("height").get<double>();
    s.resolution = doc.value("resolution", 0.1);
    s.base_label = doc.at("base").get<std::string>();
    for (const auto& c : doc.at("classes")) {
      const auto& rgb = c.at("color");
      s.classes.push_back({c.at("label").get<std::string>(),
                           Rgb{rgb.at(0).get<std::uint8_t>(), rgb.at(1).get<std::uint8_t>(), rgb.at(2).get<std::uint8_t>()},
                           c.at("risk").get<double>(), c.value("height", 0.0)});
    }
    for (const auto& p : doc.value("patches", Json::array()))
      s.patches.push_back({p.at("label").get<std::string>(), p.at("x0").get<double>(), p.at("x1").get<double>(),
                           p.at("y0").get<double>(), p.at("y1").get<double>()});
    for (const auto& a : doc.value("agents", Json::array())) {
      Agent ag;
      ag.label = a.value("label", ag.label);
      ag.radius = a.value("radius", ag.radius);
      ag.height = a.value("height", ag.height);
      ag.speed = a.value("speed", ag.speed);
      if (a.contains("trigger_x")) ag.trigger_x = a.at("trigger_x").get<double>();
      ag.waypoints = points_from(a.at("waypoints"));
      s.agents.push_back(std::move(ag));
    }
    s.start = pose_from_json(doc.at("start"));
    s.goal = pose_from_json(doc.at("goal"));
    if (doc.contains("goal_label")) s.goal_label = doc.at("goal_label").get<std::string>();
    if (doc.contains("search_hint")) s.search_hint = pose_from_json(doc.at("search_hint"));
    if (doc.contains("behavior")) s.behavior = behavior_from_json(doc.at("behavior"));
    if (doc.contains("modality")) s.modality = modality_from_json(doc.at("modality"));
    s.centerline = points_from(doc.value("centerline", Json::array()));
    s.build();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("scene: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path) { return scene_from_json(parse_text(read_file(path))); }

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  write_file(path, canonical_text(to_json(scene)));
}

Image<Rgb> scene_map(const Scene& scene) {
  Image<Rgb> img(scene.width(), scene.height());
  for (int iy = 0; iy < scene.height(); ++iy)
    for (int ix = 0; ix < scene.width(); ++ix)
      img.at(ix, scene.height() - 1 - iy) = scene.classes[scene.class_at_cell(ix, iy)].color;
  return img;
}

}  // namespace catnav::sim
