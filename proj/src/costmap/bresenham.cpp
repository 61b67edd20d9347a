#include <algorithm>
#include <cstdlib>

#include "catnav/costmap/occupancy_grid.hpp"

namespace catnav::costmap {

std::vector<CellIndex> bresenham_trace(CellIndex a, CellIndex b) {
  const bool flipped = b < a;
  const CellIndex start = flipped ? b : a;
  const CellIndex end = flipped ? a : b;

  const int dx = std::abs(end.x - start.x);
  const int dy = std::abs(end.y - start.y);
  const int sx = end.x >= start.x ? 1 : -1;
  const int sy = end.y >= start.y ? 1 : -1;

  std::vector<CellIndex> cells;
  cells.reserve(static_cast<std::size_t>(std::max(dx, dy)) + 1);
  // Midpoint form: the minor coordinate advances only when the line passes
  // strictly beyond the midpoint, so exact halves round toward the start.
  if (dx >= dy) {
    int d = 2 * dy - dx;
    int y = start.y;
    for (int i = 0; i <= dx; ++i) {
      cells.push_back({start.x + i * sx, y});
      if (d > 0) {
        y += sy;
        d -= 2 * dx;
      }
      d += 2 * dy;
    }
  } else {
    int d = 2 * dx - dy;
    int x = start.x;
    for (int i = 0; i <= dy; ++i) {
      cells.push_back({x, start.y + i * sy});
      if (d > 0) {
        x += sx;
        d -= 2 * dy;
      }
      d += 2 * dx;
    }
  }
  if (flipped) std::reverse(cells.begin(), cells.end());
  return cells;
}

}  // namespace catnav::costmap
