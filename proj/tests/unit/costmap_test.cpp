#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "catnav/core/error.hpp"
#include "catnav/costmap/occupancy_grid.hpp"
#include "catnav/costmap/pixel_costmap.hpp"
#include "catnav/costmap/point_cloud.hpp"
#include "oracles.hpp"

namespace catnav::costmap {
namespace {

ClassProbabilityStack single_pixel(const std::vector<std::tuple<std::string, double, bool>>& channels) {
  std::vector<ClassChannel> out;
  for (const auto& [label, p, bg] : channels) out.push_back({label, bg, Image<double>(1, 1, p)});
  return ClassProbabilityStack::make(std::move(out));
}

CostTable table(std::vector<RiskEntry> entries) {
  return CostTable::make(std::move(entries), "", TableSource::kFixture);
}

TEST(PixelCostmap, RiskWeightedArgmaxAboveThreshold) {
  auto stack = single_pixel({{"grass", 0.8, false}, {"person", 0.1, false}, {"background", 0.1, true}});
  auto m = build_pixel_costmap(stack, table({{"grass", 0.3, {}}, {"person", 0.7, {}}}), 0.5);
  EXPECT_EQ(m.values.at(0, 0), 0.3);
  EXPECT_EQ(m.labels[m.winner.at(0, 0)], "grass");
}

TEST(PixelCostmap, ThresholdAppliesToProbabilityNotProduct) {
  auto stack = single_pixel({{"grass", 0.4, false}, {"person", 0.5, false}, {"background", 0.1, true}});
  auto m = build_pixel_costmap(stack, table({{"grass", 0.3, {}}, {"person", 0.7, {}}}), 0.6);
  EXPECT_EQ(m.values.at(0, 0), 0.0);
  EXPECT_EQ(m.winner.at(0, 0), -1);
  // Same pixel with a lower threshold picks person (0.35 > 0.12).
  auto m2 = build_pixel_costmap(stack, table({{"grass", 0.3, {}}, {"person", 0.7, {}}}), 0.45);
  EXPECT_EQ(m2.values.at(0, 0), 0.7);
}

TEST(PixelCostmap, StrictInequalityAtDelta) {
  auto stack = single_pixel({{"grass", 0.5, false}, {"background", 0.5, true}});
  EXPECT_EQ(build_pixel_costmap(stack, table({{"grass", 0.3, {}}}), 0.5).values.at(0, 0), 0.0);
  EXPECT_EQ(build_pixel_costmap(stack, table({{"grass", 0.3, {}}}), 0.4999).values.at(0, 0), 0.3);
}

TEST(PixelCostmap, AllBackgroundIsZero) {
  auto stack = single_pixel({{"sky", 0.6, true}, {"background", 0.4, true}});
  auto m = build_pixel_costmap(stack, table({}), 0.1);
  EXPECT_EQ(m.values.at(0, 0), 0.0);
}

TEST(PixelCostmap, Errors) {
  auto stack = single_pixel({{"grass", 0.9, false}, {"background", 0.1, true}});
  EXPECT_THROW(build_pixel_costmap(stack, table({}), 0.3), Error);
  EXPECT_THROW(build_pixel_costmap(stack, table({{"grass", 0.3, {}}}), 1.5), Error);
  EXPECT_THROW(build_pixel_costmap(stack, table({{"grass", 0.3, {}}}), -0.1), Error);
  EXPECT_THROW(single_pixel({{"grass", 0.7, false}, {"background", 0.1, true}}), Error);  // sums to 0.8
}

struct RandomStack {
  std::vector<ClassChannel> channels;
  CostTable table;
};

RandomStack random_stack(std::mt19937_64& rng, int w, int h, int classes, int backgrounds) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomStack out;
  std::vector<RiskEntry> entries;
  for (int k = 0; k < classes; ++k) {
    out.channels.push_back({"class" + std::to_string(k), false, Image<double>(w, h)});
    entries.push_back({"class" + std::to_string(k), std::round(u(rng) * 10.0) / 10.0, {}});
  }
  for (int b = 0; b < backgrounds; ++b) out.channels.push_back({"bg" + std::to_string(b), true, Image<double>(w, h)});
  for (int i = 0; i < w * h; ++i) {
    std::vector<double> logits(out.channels.size());
    double sum = 0.0;
    for (auto& l : logits) sum += (l = std::exp(3.0 * u(rng)));
    for (std::size_t k = 0; k < logits.size(); ++k) out.channels[k].probability.data()[i] = logits[k] / sum;
  }
  out.table = CostTable::make(entries, "", TableSource::kFixture);
  return out;
}

TEST(PixelCostmap, PermutationInvariantAndMonotoneInDeltaProperty) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto rs = random_stack(rng, 12, 10, 1 + trial % 5, 1 + trial % 2);
    auto stack = ClassProbabilityStack::make(rs.channels);
    auto base = build_pixel_costmap(stack, rs.table, 0.3);
    auto permuted = rs.channels;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    auto other = build_pixel_costmap(ClassProbabilityStack::make(permuted), rs.table, 0.3);
    EXPECT_EQ(base.values, other.values);

    std::size_t previous = base.values.size() + 1;
    for (double delta : {0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0}) {
      auto m = build_pixel_costmap(stack, rs.table, delta);
      std::size_t nonzero = 0;
      for (double v : m.values.data()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        nonzero += v > 0.0;
      }
      EXPECT_LE(nonzero, previous);
      previous = nonzero;
    }
  }
}

TEST(Backprojection, PrincipalPointLiesOnOpticalAxis) {
  CameraModel camera;
  camera.pitch = 0.0;
  auto p = pixel_to_camera(camera, camera.cx, camera.cy, 2.0);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.y, 0.0);
  EXPECT_EQ(p.z, 2.0);
  auto r = camera_to_robot(camera, p);
  EXPECT_NEAR(r.x, 2.0, 1e-15);
  EXPECT_NEAR(r.y, 0.0, 1e-15);
  EXPECT_NEAR(r.z, camera.mount_height, 1e-15);
}

TEST(Backprojection, PitchedPrincipalRayHitsGround) {
  CameraModel camera;  // mounted 0.5 m up, pitched 0.45 rad down
  const double range = camera.mount_height / std::sin(camera.pitch);
  auto r = camera_to_robot(camera, pixel_to_camera(camera, camera.cx, camera.cy, range));
  EXPECT_NEAR(r.z, 0.0, 1e-12);
  EXPECT_NEAR(r.x, camera.mount_height / std::tan(camera.pitch), 1e-12);
}

TEST(Backprojection, StrideCountsPixels) {
  CameraModel camera;
  camera.width = 4;
  camera.height = 4;
  camera.cx = 2;
  camera.cy = 2;
  PixelCostmap m{Image<double>(4, 4, 0.2), Image<int>(4, 4, 0), {"grass"}};
  Image<double> depth(4, 4, 3.0);
  EXPECT_EQ(backproject_risk_points(m, depth, camera, 2).size(), 4u);
  EXPECT_EQ(backproject_risk_points(m, depth, camera, 1).size(), 16u);
  depth.at(0, 0) = std::numeric_limits<double>::infinity();
  depth.at(2, 0) = 0.0;
  EXPECT_EQ(backproject_risk_points(m, depth, camera, 2).size(), 2u);
  EXPECT_THROW(backproject_risk_points(m, Image<double>(3, 4, 1.0), camera, 2), Error);
  EXPECT_THROW(backproject_risk_points(m, depth, camera, 0), Error);
}

TEST(Backprojection, ReprojectionRoundTrip) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CameraModel camera;
    camera.width = 320 + trial;
    camera.height = 240;
    camera.fx = 100 + 400 * u(rng);
    camera.fy = 100 + 400 * u(rng);
    camera.cx = camera.width * u(rng);
    camera.cy = camera.height * u(rng);
    camera.pitch = u(rng) - 0.5;
    const double pu = camera.width * u(rng), pv = camera.height * u(rng), d = 0.3 + 20 * u(rng);
    auto robot = camera_to_robot(camera, pixel_to_camera(camera, pu, pv, d));
    // Independent forward model: rotate back by hand, then project with K.
    const double c = std::cos(camera.pitch), s = std::sin(camera.pitch);
    const double qx = robot.x, qy = robot.y, qz = robot.z - camera.mount_height;
    const double xc = -qy, yc = -s * qx - c * qz, zc = c * qx - s * qz;
    EXPECT_NEAR(camera.fx * xc / zc + camera.cx, pu, 1e-9);
    EXPECT_NEAR(camera.fy * yc / zc + camera.cy, pv, 1e-9);
  }
}

TEST(VoxelDownsample, KeepsMaxRisk) {
  auto out = voxel_downsample({{0.01, 0.01, 0.01, 0.2}, {0.05, 0.02, 0.03, 0.7}}, 0.1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].risk, 0.7);
}

TEST(VoxelDownsample, FirstWinsOnTies) {
  auto out = voxel_downsample({{0.01, 0.01, 0.01, 0.5}, {0.05, 0.02, 0.03, 0.5}}, 0.1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].x, 0.01);
}

TEST(VoxelDownsample, DistinctVoxelsUnchanged) {
  std::vector<RiskPoint> pts{{0.05, 0.05, 0.05, 0.1}, {1.05, 0.05, 0.05, 0.2}, {-0.05, 0.05, 0.05, 0.3}};
  auto out = voxel_downsample(pts, 0.1);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out[i].x, pts[i].x);
  EXPECT_THROW(voxel_downsample(pts, 0.0), Error);
}

TEST(VoxelDownsample, CountMatchesBucketOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> r(0.0, 1.0);
  std::vector<RiskPoint> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({u(rng), u(rng), u(rng) * 0.1, r(rng)});
  std::map<std::tuple<long, long, long>, double> buckets;
  for (const auto& p : pts) {
    auto key = std::make_tuple(static_cast<long>(std::floor(p.x / 0.1)), static_cast<long>(std::floor(p.y / 0.1)),
                               static_cast<long>(std::floor(p.z / 0.1)));
    buckets[key] = std::max(buckets.count(key) ? buckets[key] : -1.0, p.risk);
  }
  auto out = voxel_downsample(pts, 0.1);
  EXPECT_EQ(out.size(), buckets.size());
  for (const auto& p : out) {
    auto key = std::make_tuple(static_cast<long>(std::floor(p.x / 0.1)), static_cast<long>(std::floor(p.y / 0.1)),
                               static_cast<long>(std::floor(p.z / 0.1)));
    EXPECT_EQ(buckets.at(key), p.risk);
  }
}

std::vector<std::pair<int, int>> as_pairs(const std::vector<CellIndex>& cells) {
  std::vector<std::pair<int, int>> out;
  for (const auto& c : cells) out.push_back({c.x, c.y});
  return out;
}

TEST(Bresenham, Examples) {
  EXPECT_EQ(as_pairs(bresenham_trace({0, 0}, {0, 0})), (std::vector<std::pair<int, int>>{{0, 0}}));
  EXPECT_EQ(as_pairs(bresenham_trace({0, 0}, {3, 0})), (std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  EXPECT_EQ(as_pairs(bresenham_trace({0, 0}, {5, 3})),
            (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3}}));
  EXPECT_EQ(as_pairs(bresenham_trace({0, 0}, {6, 2})), oracle::line_walk({0, 0}, {6, 2}));
}

TEST(Bresenham, MatchesLineWalkOracleAndIsSymmetricProperty) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> c(-30, 30);
  for (int trial = 0; trial < 2000; ++trial) {
    CellIndex a{c(rng), c(rng)}, b{c(rng), c(rng)};
    auto forward = bresenham_trace(a, b);
    auto backward = bresenham_trace(b, a);
    ASSERT_EQ(forward.front(), a);
    ASSERT_EQ(forward.back(), b);
    for (std::size_t i = 1; i < forward.size(); ++i) {
      EXPECT_LE(std::abs(forward[i].x - forward[i - 1].x), 1);
      EXPECT_LE(std::abs(forward[i].y - forward[i - 1].y), 1);
    }
    std::reverse(backward.begin(), backward.end());
    EXPECT_EQ(forward, backward);
    const CellIndex lo = std::min(a, b), hi = std::max(a, b);
    auto expect = oracle::line_walk({lo.x, lo.y}, {hi.x, hi.y});
    auto got = as_pairs(bresenham_trace(lo, hi));
    EXPECT_EQ(got, expect);
  }
}

OccupancyGrid small_grid() { return OccupancyGrid(20, 20, 0.1, Pose2D{0.0, 0.0, 0.0}); }

TEST(OccupancyGrid, MaxCollapseInOneCell) {
  auto grid = small_grid();
  std::vector<RiskPoint> pts{{1.01, 1.01, 0.0, 0.2}, {1.05, 1.05, 0.4, 0.7}};
  update_occupancy_grid(grid, pts, Pose2D{0.05, 0.05, 0.0});
  const Cell& cell = grid.at({10, 10});
  EXPECT_EQ(cell.state, CellState::kRisk);
  EXPECT_EQ(cell.risk, 0.7);
}

TEST(OccupancyGrid, ZeroRiskPointClearsRay) {
  auto grid = small_grid();
  std::vector<RiskPoint> pts{{1.55, 0.05, 0.0, 0.0}};
  auto stats = update_occupancy_grid(grid, pts, Pose2D{0.05, 0.05, 0.0});
  for (int x = 1; x <= 15; ++x) EXPECT_EQ(grid.at({x, 0}).state, CellState::kFree) << x;
  EXPECT_EQ(grid.at({0, 0}).state, CellState::kUnknown);  // the sensor cell itself is not on the open ray
  EXPECT_EQ(grid.at({16, 0}).state, CellState::kUnknown);
  EXPECT_EQ(grid.at({5, 1}).state, CellState::kUnknown);
  EXPECT_EQ(stats.cells_cleared, 14u);
}

TEST(OccupancyGrid, RayMatchesLineRasterization) {
  auto grid = small_grid();
  std::vector<RiskPoint> pts{{0.65, 0.25, 0.0, 0.5}};
  update_occupancy_grid(grid, pts, Pose2D{0.05, 0.05, 0.0});
  auto ray = oracle::line_walk({0, 0}, {6, 2});
  std::set<std::pair<int, int>> expected(ray.begin() + 1, ray.end() - 1);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) {
      const auto state = grid.at({x, y}).state;
      if (x == 6 && y == 2) EXPECT_EQ(state, CellState::kRisk);
      else if (expected.count({x, y})) EXPECT_EQ(state, CellState::kFree) << x << "," << y;
      else EXPECT_EQ(state, CellState::kUnknown) << x << "," << y;
    }
}

TEST(OccupancyGrid, RiskCellsSurviveClearingAndOrder) {
  auto grid = small_grid();
  std::vector<RiskPoint> pts{{0.55, 0.05, 0.0, 0.6}, {1.55, 0.05, 0.0, 0.0}};
  update_occupancy_grid(grid, pts, Pose2D{0.05, 0.05, 0.0});
  EXPECT_EQ(grid.at({5, 0}).state, CellState::kRisk);
  auto other = small_grid();
  std::vector<RiskPoint> reversed(pts.rbegin(), pts.rend());
  update_occupancy_grid(other, reversed, Pose2D{0.05, 0.05, 0.0});
  EXPECT_EQ(grid, other);
  // A later pass that only clears still leaves the risk cell alone.
  update_occupancy_grid(grid, std::vector<RiskPoint>{{1.95, 0.05, 0.0, 0.0}}, Pose2D{0.05, 0.05, 0.0});
  EXPECT_EQ(grid.at({5, 0}).risk, 0.6);
}

TEST(OccupancyGrid, OutOfBoundsPointsSkipped) {
  auto grid = small_grid();
  auto stats = update_occupancy_grid(grid, std::vector<RiskPoint>{{5.0, 5.0, 0.0, 0.5}, {-0.5, 0.5, 0.0, 0.5}},
                                     Pose2D{0.05, 0.05, 0.0});
  EXPECT_EQ(stats.skipped_out_of_bounds, 2u);
  EXPECT_EQ(stats.applied, 0u);
  for (const auto& c : grid.cells()) EXPECT_EQ(c.state, CellState::kUnknown);
}

TEST(OccupancyGrid, ScrollKeepsOverlap) {
  auto grid = OccupancyGrid::centered(0.0, 0.0, 2.0, 0.1);
  const CellIndex marked = grid.world_to_cell(0.52, 0.33);
  grid.at(marked) = Cell{CellState::kRisk, 0.4};
  grid.scroll_to(0.75, -0.3);
  const CellIndex moved = grid.world_to_cell(0.52, 0.33);
  ASSERT_TRUE(grid.contains(moved));
  EXPECT_EQ(grid.at(moved).risk, 0.4);
  std::size_t risky = 0;
  for (const auto& c : grid.cells()) risky += c.state == CellState::kRisk;
  EXPECT_EQ(risky, 1u);
  const auto center = grid.cell_center({grid.width() / 2, grid.height() / 2});
  EXPECT_NEAR(center[0], 0.75, 0.1);
  EXPECT_NEAR(center[1], -0.3, 0.1);
}

TEST(OccupancyGrid, RotatedOriginRoundTrip) {
  OccupancyGrid grid(10, 10, 0.2, make_pose(1.0, 2.0, 0.7));
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) {
      auto c = grid.cell_center({x, y});
      EXPECT_EQ(grid.world_to_cell(c[0], c[1]), (CellIndex{x, y}));
    }
}

TEST(OccupancyGrid, RasterEncoding) {
  auto grid = small_grid();
  grid.at({0, 0}) = Cell{CellState::kFree, 0.0};
  grid.at({1, 0}) = Cell{CellState::kRisk, 1.0};
  auto img = grid.to_raster();
  EXPECT_EQ(img.at(0, 19), 255);
  EXPECT_EQ(img.at(1, 19), 0);
  EXPECT_EQ(img.at(5, 5), 128);
  EXPECT_EQ(grid.metadata()["resolution"], 0.1);
}

}  // namespace
}  // namespace catnav::costmap
