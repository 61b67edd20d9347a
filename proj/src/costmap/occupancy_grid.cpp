#include "catnav/costmap/occupancy_grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"

namespace catnav::costmap {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Pose2D origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, "grid size must be positive");
  if (!(resolution > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grid resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, Cell{});
}

OccupancyGrid OccupancyGrid::centered(double cx, double cy, double size_m, double resolution) {
  const int n = static_cast<int>(std::lround(size_m / resolution));
  const double half = 0.5 * n * resolution;
  // Snap the corner to the resolution lattice so scrolled windows stay aligned.
  const double ox = std::floor((cx - half) / resolution) * resolution;
  const double oy = std::floor((cy - half) / resolution) * resolution;
  return OccupancyGrid(n, n, resolution, Pose2D{ox, oy, 0.0});
}

CellIndex OccupancyGrid::world_to_cell(double x, double y) const {
  const double dx = x - origin_.x;
  const double dy = y - origin_.y;
  const double c = std::cos(origin_.heading);
  const double s = std::sin(origin_.heading);
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  return {static_cast<int>(std::floor(lx / resolution_)), static_cast<int>(std::floor(ly / resolution_))};
}

std::array<double, 2> OccupancyGrid::cell_center(CellIndex cell) const {
  const double lx = (cell.x + 0.5) * resolution_;
  const double ly = (cell.y + 0.5) * resolution_;
  const double c = std::cos(origin_.heading);
  const double s = std::sin(origin_.heading);
  return {origin_.x + c * lx - s * ly, origin_.y + s * lx + c * ly};
}

void OccupancyGrid::scroll_to(double cx, double cy) {
  const CellIndex target = world_to_cell(cx, cy);
  const int shift_x = target.x - width_ / 2;
  const int shift_y = target.y - height_ / 2;
  if (shift_x == 0 && shift_y == 0) return;

  std::vector<Cell> moved(cells_.size(), Cell{});
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const CellIndex src{x + shift_x, y + shift_y};
      if (contains(src)) moved[index({x, y})] = cells_[index(src)];
    }
  }
  cells_ = std::move(moved);
  const double c = std::cos(origin_.heading);
  const double s = std::sin(origin_.heading);
  origin_.x += (c * shift_x - s * shift_y) * resolution_;
  origin_.y += (s * shift_x + c * shift_y) * resolution_;
}

Image<std::uint8_t> OccupancyGrid::to_raster() const {
  Image<std::uint8_t> img(width_, height_, 128);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const Cell& cell = at({x, y});
      // Row 0 of the raster is the top (max y) so the image reads like a map.
      auto& px = img.at(x, height_ - 1 - y);
      switch (cell.state) {
        case CellState::kUnknown: px = 128; break;
        case CellState::kFree: px = 255; break;
        case CellState::kRisk: px = static_cast<std::uint8_t>(std::lround(250.0 * (1.0 - cell.risk))); break;
      }
    }
  }
  return img;
}

Json OccupancyGrid::metadata() const {
  return Json{{"schema_version", kSchemaVersion},
              {"width", width_},
              {"height", height_},
              {"resolution", resolution_},
              {"origin", to_json(origin_)},
              {"encoding", Json{{"free", 255}, {"unknown", 128}, {"risk", "round(250*(1-r))"}, {"row0", "max_y"}}}};
}

std::uint64_t OccupancyGrid::fingerprint() const {
  // FNV-1a over (state byte, little-endian risk) per cell, then the header doubles.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  auto mix_double = [&mix](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) mix(static_cast<std::uint8_t>(bits >> (8 * b)));
  };
  for (const auto& cell : cells_) {
    mix(static_cast<std::uint8_t>(cell.state));
    mix_double(cell.risk);
  }
  for (double v : {static_cast<double>(width_), static_cast<double>(height_), resolution_, origin_.x, origin_.y,
                   origin_.heading})
    mix_double(v);
  return h;
}

GridUpdateStats update_occupancy_grid(OccupancyGrid& grid, std::span<const RiskPoint> points,
                                      const Pose2D& sensor_origin) {
  GridUpdateStats stats;
  std::vector<CellIndex> endpoints;
  endpoints.reserve(points.size());
  for (const auto& p : points) {
    const CellIndex cell = grid.world_to_cell(p.x, p.y);
    if (!grid.contains(cell) || !std::isfinite(p.risk)) {
      ++stats.skipped_out_of_bounds;
      continue;
    }
    Cell& target = grid.at(cell);
    if (p.risk > 0.0) {
      target.risk = target.state == CellState::kRisk ? std::max(target.risk, p.risk) : p.risk;
      target.state = CellState::kRisk;
    } else if (target.state == CellState::kUnknown) {
      target.state = CellState::kFree;
      target.risk = 0.0;
    }
    endpoints.push_back(cell);
    ++stats.applied;
  }

  const CellIndex source = grid.world_to_cell(sensor_origin.x, sensor_origin.y);
  for (const auto& end : endpoints) {
    const auto ray = bresenham_trace(source, end);
    for (std::size_t i = 1; i + 1 < ray.size(); ++i) {
      if (!grid.contains(ray[i])) continue;
      Cell& cell = grid.at(ray[i]);
      if (cell.state == CellState::kUnknown) {
        cell.state = CellState::kFree;
        cell.risk = 0.0;
        ++stats.cells_cleared;
      }
    }
  }
  return stats;
}

void export_grid(const OccupancyGrid& grid, const std::string& path_stem) {
  write_file(path_stem + ".pgm", encode_pgm(grid.to_raster()));
  write_file(path_stem + ".json", canonical_text(grid.metadata()));
}

}  // namespace catnav::costmap
