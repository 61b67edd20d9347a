#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catnav/core/raster.hpp"
#include "catnav/core/serialize.hpp"
#include "catnav/core/types.hpp"
#include "catnav/costmap/point_cloud.hpp"

namespace catnav::costmap {

struct CellIndex {
  int x = 0;
  int y = 0;
  auto operator<=>(const CellIndex&) const = default;
};

enum class CellState : std::uint8_t { kUnknown, kFree, kRisk };

struct Cell {
  CellState state = CellState::kUnknown;
  double risk = 0.0;  // meaningful only when state == kRisk

  friend bool operator==(const Cell&, const Cell&) = default;
};

inline constexpr double kDefaultResolution = 0.1;
inline constexpr double kDefaultWindow = 20.0;

/// Top-down risk grid. `origin` is the world pose of the outer corner of cell
/// (0, 0); cell x runs along the origin heading.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Pose2D origin = {});

  /// Square window of `size_m` meters centered on (cx, cy), axis-aligned.
  static OccupancyGrid centered(double cx, double cy, double size_m = kDefaultWindow,
                                double resolution = kDefaultResolution);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }
  const Pose2D& origin() const noexcept { return origin_; }

  bool contains(CellIndex c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  const Cell& at(CellIndex c) const { return cells_[index(c)]; }
  Cell& at(CellIndex c) { return cells_[index(c)]; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// Cell containing a world point, even when it lies outside the grid.
  CellIndex world_to_cell(double x, double y) const;
  std::array<double, 2> cell_center(CellIndex c) const;

  /// Shifts the window by whole cells so that (cx, cy) is near the center.
  /// Overlapping cells keep their contents; new cells start unknown.
  void scroll_to(double cx, double cy);

  /// Grayscale export: free 255, unknown 128, risk r -> round(250 * (1 - r)).
  Image<std::uint8_t> to_raster() const;
  Json metadata() const;
  std::uint64_t fingerprint() const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::size_t index(CellIndex c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = kDefaultResolution;
  Pose2D origin_;
  std::vector<Cell> cells_;
};

struct GridUpdateStats {
  std::size_t applied = 0;
  std::size_t skipped_out_of_bounds = 0;
  std::size_t cells_cleared = 0;
};

/// Max-collapses every in-bounds point into its cell, then clears the cells
/// strictly between the sensor cell and each point cell. Clearing never
/// touches cells already holding risk, so the result does not depend on the
/// order of `points`.
GridUpdateStats update_occupancy_grid(OccupancyGrid& grid, std::span<const RiskPoint> points,
                                      const Pose2D& sensor_origin);

/// 8-connected Bresenham line from a to b inclusive. The walk always starts
/// from the lexicographically smaller endpoint, so reversing the arguments
/// yields the same cells in reverse order.
std::vector<CellIndex> bresenham_trace(CellIndex a, CellIndex b);

void export_grid(const OccupancyGrid& grid, const std::string& path_stem);

}  // namespace catnav::costmap
