#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "catnav/sim/scene.hpp"

namespace catnav::sim {

/// footpath-right, footpath-center, human-crossing, bench-field, paper-indoor.
const std::vector<std::string>& task_names();

/// Generates a task scene; the seed jitters obstacle placement.
Scene make_task(std::string_view name, std::uint64_t seed);

/// Palette shared by the generated tasks.
std::vector<SceneClass> default_palette();

}  // namespace catnav::sim
