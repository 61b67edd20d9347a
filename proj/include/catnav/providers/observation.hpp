#pragma once

#include <map>
#include <string>
#include <vector>

#include "catnav/core/raster.hpp"

namespace catnav::providers {

inline constexpr int kSkyClass = -1;

/// One rendered frame. `truth_class` indexes `class_names` (kSkyClass for
/// sky); remote providers only ever see `rgb`.
struct Observation {
  int frame_id = 0;
  Image<Rgb> rgb;
  Image<double> depth;
  Image<int> truth_class;
  std::vector<std::string> class_names;

  /// Fraction of pixels per class name; sky pixels count as "sky".
  std::map<std::string, double> class_histogram() const;
  /// Non-sky classes with at least one pixel, sorted.
  std::vector<std::string> visible_classes() const;
};

struct PaletteEntry {
  std::string label;
  Rgb color{};
};

inline constexpr Rgb kSkyColor = {135, 206, 235};

/// Recovers truth classes from an RGB frame whose pixels are exact palette
/// colors. Colors not in the palette (including the sky color) become sky.
Observation observation_from_rgb(const Image<Rgb>& rgb, const std::vector<PaletteEntry>& palette, int frame_id);

}  // namespace catnav::providers
