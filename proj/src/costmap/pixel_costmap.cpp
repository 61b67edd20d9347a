#include "catnav/costmap/pixel_costmap.hpp"

#include <cmath>
#include <set>

#include "catnav/core/error.hpp"

namespace catnav::costmap {

ClassProbabilityStack ClassProbabilityStack::make(std::vector<ClassChannel> channels, double sum_tolerance) {
  if (channels.empty()) throw Error(ErrorCode::kEmptyInput, "probability stack has no channels");
  const int w = channels.front().probability.width();
  const int h = channels.front().probability.height();
  std::set<std::string> seen;
  for (auto& ch : channels) {
    ch.label = normalize_label(ch.label);
    if (!seen.insert(ch.label).second) throw Error(ErrorCode::kDuplicateLabel, "channel '" + ch.label + "' repeated");
    if (ch.probability.width() != w || ch.probability.height() != h)
      throw Error(ErrorCode::kSizeMismatch, "channel '" + ch.label + "' has a different size");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
    double sum = 0.0;
    for (const auto& ch : channels) {
      const double p = ch.probability.data()[i];
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > sum_tolerance)
      throw Error(ErrorCode::kInvalidArgument, "pixel probabilities do not sum to 1");
  }
  ClassProbabilityStack stack;
  stack.width_ = w;
  stack.height_ = h;
  stack.channels_ = std::move(channels);
  return stack;
}

PixelCostmap build_pixel_costmap(const ClassProbabilityStack& stack, const CostTable& table, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in [0,1]");

  const auto& channels = stack.channels();
  struct Candidate {
    const double* prob;
    double risk;
    const std::string* label;
    int index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (channels[k].background) continue;
    auto risk = table.risk(channels[k].label);
    if (!risk) throw Error(ErrorCode::kMissingRisk, "no risk for class '" + channels[k].label + "'");
    candidates.push_back({channels[k].probability.data().data(), *risk, &channels[k].label, static_cast<int>(k)});
  }

  PixelCostmap out{Image<double>(stack.width(), stack.height(), 0.0), Image<int>(stack.width(), stack.height(), -1), {}};
  for (const auto& ch : channels) out.labels.push_back(ch.label);
  if (candidates.empty()) return out;

  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Candidate* best = nullptr;
    double best_score = 0.0;
    double best_p = 0.0;
    for (const auto& c : candidates) {
      const double p = c.prob[i];
      const double score = p * c.risk;
      bool better = false;
      if (best == nullptr || score > best_score) {
        better = true;
      } else if (score == best_score) {
        better = p > best_p || (p == best_p && *c.label < *best->label);
      }
      if (better) {
        best = &c;
        best_score = score;
        best_p = p;
      }
    }
    if (best_p > delta) {
      out.values.data()[i] = best->risk;
      out.winner.data()[i] = best->index;
    }
  }
  return out;
}

}  // namespace catnav::costmap
