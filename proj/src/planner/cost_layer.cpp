#include "catnav/planner/cost_layer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace catnav::planner {

using costmap::CellIndex;
using costmap::CellState;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Local {
  double x;
  double y;
};

// Continuous cell coordinates (cell (i, j) spans [i, i+1) x [j, j+1)).
Local to_local(const costmap::OccupancyGrid& grid, double x, double y) {
  const auto& o = grid.origin();
  const double dx = x - o.x;
  const double dy = y - o.y;
  const double c = std::cos(o.heading);
  const double s = std::sin(o.heading);
  return {(c * dx + s * dy) / grid.resolution(), (-s * dx + c * dy) / grid.resolution()};
}

// Amanatides-Woo traversal; calls visit(cell, t0, t1) for each cell crossed,
// with t in [0, 1] along the segment.
template <class Visit>
void traverse(Local a, Local b, Visit&& visit) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  CellIndex cell{static_cast<int>(std::floor(a.x)), static_cast<int>(std::floor(a.y))};
  const CellIndex last{static_cast<int>(std::floor(b.x)), static_cast<int>(std::floor(b.y))};
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double delta_x = step_x != 0 ? std::abs(1.0 / dx) : kInf;
  const double delta_y = step_y != 0 ? std::abs(1.0 / dy) : kInf;
  double t_max_x = kInf;
  double t_max_y = kInf;
  if (step_x > 0) t_max_x = (cell.x + 1 - a.x) / dx;
  if (step_x < 0) t_max_x = (cell.x - a.x) / dx;
  if (step_y > 0) t_max_y = (cell.y + 1 - a.y) / dy;
  if (step_y < 0) t_max_y = (cell.y - a.y) / dy;

  double t = 0.0;
  const int max_steps = std::abs(last.x - cell.x) + std::abs(last.y - cell.y) + 2;
  for (int i = 0; i < max_steps; ++i) {
    const double t_next = std::min({t_max_x, t_max_y, 1.0});
    if (!visit(cell, t, t_next)) return;
    if (t_next >= 1.0 || cell == last) return;
    t = t_next;
    if (t_max_x < t_max_y) {
      cell.x += step_x;
      t_max_x += delta_x;
    } else {
      cell.y += step_y;
      t_max_y += delta_y;
    }
  }
}

}  // namespace

CostLayer::CostLayer(costmap::OccupancyGrid grid, double unknown_cost, double footprint_radius)
    : grid_(std::move(grid)), unknown_cost_(unknown_cost), footprint_radius_(std::max(0.0, footprint_radius)) {
  const int w = grid_.width();
  const int h = grid_.height();
  raw_.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto& cell = grid_.at({x, y});
      double v = unknown_cost_;
      if (cell.state == CellState::kFree) v = 0.0;
      if (cell.state == CellState::kRisk) v = cell.risk;
      raw_[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  if (footprint_radius_ == 0.0) {
    inflated_ = raw_;
    return;
  }

  const double res = grid_.resolution();
  const double reach = footprint_radius_ + 0.5 * res;
  const int span = static_cast<int>(std::ceil(reach / res));
  // A disc is a stack of horizontal runs, so the disc max is the max over
  // rows of 1D window maxima with per-row half widths.
  std::vector<int> half_width(2 * span + 1, -1);
  for (int oy = -span; oy <= span; ++oy)
    for (int ox = 0; ox <= span; ++ox)
      if ((ox * ox + oy * oy) * res * res <= reach * reach + 1e-12) half_width[oy + span] = ox;
  const int widest = *std::max_element(half_width.begin(), half_width.end());

  // row_max[k] holds, per padded row, the max over [x - k, x + k]
  const int pw = w + 2 * widest;
  std::vector<std::vector<double>> row_max(widest + 1, std::vector<double>(static_cast<std::size_t>(pw) * h));
  for (int y = 0; y < h; ++y) {
    double* r0 = &row_max[0][static_cast<std::size_t>(y) * pw];
    std::fill(r0, r0 + pw, unknown_cost_);
    std::copy_n(&raw_[static_cast<std::size_t>(y) * w], w, r0 + widest);
  }
  for (int k = 1; k <= widest; ++k) {
    for (int y = 0; y < h; ++y) {
      const double* base = &row_max[0][static_cast<std::size_t>(y) * pw];
      const double* prev = &row_max[k - 1][static_cast<std::size_t>(y) * pw];
      double* cur = &row_max[k][static_cast<std::size_t>(y) * pw];
      for (int x = 0; x < pw; ++x) {
        double v = prev[x];
        if (x - k >= 0) v = std::max(v, base[x - k]);
        else v = std::max(v, unknown_cost_);
        if (x + k < pw) v = std::max(v, base[x + k]);
        else v = std::max(v, unknown_cost_);
        cur[x] = v;
      }
    }
  }

  inflated_.assign(raw_.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    double* out = &inflated_[static_cast<std::size_t>(y) * w];
    for (int oy = -span; oy <= span; ++oy) {
      const int k = half_width[oy + span];
      if (k < 0) continue;
      const int yy = y + oy;
      if (yy < 0 || yy >= h) {
        for (int x = 0; x < w; ++x) out[x] = std::max(out[x], unknown_cost_);
        continue;
      }
      const double* src = &row_max[k][static_cast<std::size_t>(yy) * pw + widest];
      for (int x = 0; x < w; ++x) out[x] = std::max(out[x], src[x]);
    }
  }
}

double CostLayer::raw(CellIndex c) const {
  if (!grid_.contains(c)) return unknown_cost_;
  return raw_[static_cast<std::size_t>(c.y) * grid_.width() + c.x];
}

double CostLayer::inflated(CellIndex c) const {
  if (!grid_.contains(c)) return kInf;
  return inflated_[static_cast<std::size_t>(c.y) * grid_.width() + c.x];
}

bool CostLayer::segment_feasible(double ax, double ay, double bx, double by, double ceiling) const {
  bool ok = true;
  traverse(to_local(grid_, ax, ay), to_local(grid_, bx, by), [&](CellIndex c, double, double) {
    ok = inflated(c) <= ceiling;
    return ok;
  });
  return ok;
}

double CostLayer::segment_cost(double ax, double ay, double bx, double by, bool use_inflation) const {
  const double length = std::hypot(bx - ax, by - ay);
  if (length == 0.0) return 0.0;
  double total = 0.0;
  traverse(to_local(grid_, ax, ay), to_local(grid_, bx, by), [&](CellIndex c, double t0, double t1) {
    double v = use_inflation ? inflated(c) : raw(c);
    if (!std::isfinite(v)) v = unknown_cost_;
    total += v * (t1 - t0) * length;
    return true;
  });
  return total;
}

}  // namespace catnav::planner
