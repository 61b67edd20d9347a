#include "catnav/providers/observation.hpp"

#include <algorithm>

namespace catnav::providers {

std::map<std::string, double> Observation::class_histogram() const {
  std::map<std::string, double> hist;
  const auto& px = truth_class.data();
  if (px.empty()) return hist;
  std::vector<std::size_t> counts(class_names.size(), 0);
  std::size_t sky = 0;
  for (int c : px) {
    if (c >= 0 && static_cast<std::size_t>(c) < counts.size()) ++counts[c];
    else ++sky;
  }
  const double n = static_cast<double>(px.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) hist[class_names[i]] += counts[i] / n;
  if (sky > 0) hist["sky"] += sky / n;
  return hist;
}

std::vector<std::string> Observation::visible_classes() const {
  std::vector<bool> seen(class_names.size(), false);
  for (int c : truth_class.data())
    if (c >= 0 && static_cast<std::size_t>(c) < seen.size()) seen[c] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(class_names[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Observation observation_from_rgb(const Image<Rgb>& rgb, const std::vector<PaletteEntry>& palette, int frame_id) {
  Observation obs;
  obs.frame_id = frame_id;
  obs.rgb = rgb;
  obs.truth_class = Image<int>(rgb.width(), rgb.height(), kSkyClass);
  std::map<Rgb, int> lookup;
  for (const auto& entry : palette) {
    lookup.emplace(entry.color, static_cast<int>(obs.class_names.size()));
    obs.class_names.push_back(entry.label);
  }
  for (std::size_t i = 0; i < rgb.data().size(); ++i) {
    const auto it = lookup.find(rgb.data()[i]);
    if (it != lookup.end()) obs.truth_class.data()[i] = it->second;
  }
  return obs;
}

}  // namespace catnav::providers
