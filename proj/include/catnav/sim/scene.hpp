#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/core/serialize.hpp"
#include "catnav/core/types.hpp"
#include "catnav/reasoning/behavior.hpp"

namespace catnav::sim {

struct SceneClass {
  std::string label;
  Rgb color{};
  double risk = 0.0;
  double height = 0.0;  // m; anything above zero occludes
};

/// Axis-aligned rectangle painted with one class; later patches win.
struct TerrainPatch {
  std::string label;
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

/// Vertical cylinder that waits at its first waypoint until the robot passes
/// `trigger_x`, then walks the waypoints at constant speed and stays at the end.
struct Agent {
  std::string label = "person";
  double radius = 0.3;
  double height = 1.7;
  double speed = 1.0;
  std::optional<double> trigger_x;
  std::vector<std::array<double, 2>> waypoints;
};

struct AgentPose {
  std::size_t agent = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Position of `agent` `elapsed` seconds after its trigger fired.
std::array<double, 2> agent_position(const Agent& agent, double elapsed);

class Scene {
 public:
  std::string name;
  double x_min = 0.0;
  double y_min = 0.0;
  double width_m = 10.0;
  double height_m = 10.0;
  double resolution = 0.1;
  std::string base_label;
  std::vector<SceneClass> classes;
  std::vector<TerrainPatch> patches;
  std::vector<Agent> agents;
  Pose2D start;
  Pose2D goal;  // true goal location
  std::optional<std::string> goal_label;  // image-point goal; `search_hint` steers until it is seen
  std::optional<Pose2D> search_hint;
  BehaviorSpec behavior;
  RobotModality modality{"wheeled robot", 0.3, 0.75};
  std::vector<std::array<double, 2>> centerline;

  /// Validates the description and rasterizes the patches. Must be called
  /// after editing any field above.
  void build();

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains_cell(int ix, int iy) const noexcept { return ix >= 0 && iy >= 0 && ix < width_ && iy < height_; }
  std::array<int, 2> cell_of(double x, double y) const;
  int class_at_cell(int ix, int iy) const { return cells_[static_cast<std::size_t>(iy) * width_ + ix]; }
  double height_at_cell(int ix, int iy) const { return classes[class_at_cell(ix, iy)].height; }
  /// Class index under a world point, nullopt outside the scene.
  std::optional<int> class_at(double x, double y) const;
  int class_index(const std::string& label) const;
  std::vector<std::string> class_names() const;

  double lateral_offset(double x, double y) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<int> cells_;
};

/// Ground truth view used by the mock selector and the violation metric.
class SceneTruthView : public reasoning::SceneTruth {
 public:
  explicit SceneTruthView(std::shared_ptr<const Scene> scene) : scene_(std::move(scene)) {}
  std::string class_at(double x, double y) const override;
  double lateral_offset(double x, double y) const override { return scene_->lateral_offset(x, y); }

 private:
  std::shared_ptr<const Scene> scene_;
};

Json to_json(const Scene& scene);
/// Parses and builds a scene.
Scene scene_from_json(const Json& doc);

Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

/// Top-down class raster in scene colors, row 0 at the largest y.
Image<Rgb> scene_map(const Scene& scene);

}  // namespace catnav::sim
