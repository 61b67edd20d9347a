#pragma once

#include <string>
#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/core/types.hpp"

namespace catnav::costmap {

inline constexpr double kDefaultDelta = 0.35;

struct ClassChannel {
  std::string label;
  bool background = false;
  Image<double> probability;
};

/// Per-pixel class distribution over all channels, background included.
class ClassProbabilityStack {
 public:
  /// Validates equal sizes, unique labels, p in [0,1] and per-pixel sums of 1
  /// within `sum_tolerance`.
  static ClassProbabilityStack make(std::vector<ClassChannel> channels, double sum_tolerance = 1e-4);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<ClassChannel>& channels() const noexcept { return channels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<ClassChannel> channels_;
};

struct PixelCostmap {
  Image<double> values;
  /// Channel index of the risk-weighted argmax per pixel, -1 where M = 0
  /// because of thresholding or an all-background pixel.
  Image<int> winner;
  std::vector<std::string> labels;  // channel labels, indexable by `winner`

  int width() const noexcept { return values.width(); }
  int height() const noexcept { return values.height(); }
};

/// M(u,v) = r_kc if p_kc(u,v) > delta else 0, with kc = argmax over
/// non-background k of p_k(u,v) * r_k. Equal products fall back to the higher
/// probability and then the smaller label, so channel order never matters.
PixelCostmap build_pixel_costmap(const ClassProbabilityStack& stack, const CostTable& table,
                                 double delta = kDefaultDelta);

}  // namespace catnav::costmap
