// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beamlab/vdf.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "beamlab/detection.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {
namespace {

PlacedBox box_at(double x, double y, VehicleKind kind, double azimuth) {
  const auto& d = vehicle_dims(kind);
  return {Vec3(x, y, 0.5 * d.height), Vec3(d.length, d.width, d.height), azimuth};
}

TEST(Grid, DefaultStreetHas132Cells) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  const GridConfig g = make_grid(c.lanes);
  // Lanes cover y in [1, 22] and x in [-60, 60]: rows 0..10, columns -6..5.
  EXPECT_EQ(g.count(), 12 * 11);
  EXPECT_EQ(g.cells.front(), (std::array<int, 2>{-6, 0}));
  EXPECT_EQ(g.cells.back(), (std::array<int, 2>{5, 10}));
  for (int i = 1; i < g.count(); ++i) {
    const auto& a = g.cells[i - 1];
    const auto& b = g.cells[i];
    EXPECT_TRUE(a[1] < b[1] || (a[1] == b[1] && a[0] < b[0]));
  }
}

TEST(Grid, CellOfUsesHalfOpenCells) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  const int row = g.cell_of(0.0, 2.0);
  ASSERT_GE(row, 0);
  EXPECT_EQ(g.cells[row], (std::array<int, 2>{0, 1}));
  EXPECT_EQ(g.cells[g.cell_of(-1e-9, 2.0)], (std::array<int, 2>{-1, 1}));
  EXPECT_EQ(g.cells[g.cell_of(11.7, 1.999)], (std::array<int, 2>{1, 0}));
  EXPECT_EQ(g.cell_of(0.0, -5.0), -1);
  EXPECT_EQ(g.cell_of(0.0, 30.0), -1);
}

TEST(Grid, LaneEdgeTouchingOnlyIsExcluded) {
  LaneSpec lane;
  lane.start = Vec2(0, 3);
  lane.end = Vec2(10, 3);
  lane.width = 2.0;  // y in [2, 4]: touches rows 0 and 2 only along edges
  const GridConfig g = make_grid(std::vector<LaneSpec>{lane}, 5.0, 2.0);
  ASSERT_EQ(g.count(), 2);
  EXPECT_EQ(g.cells[0], (std::array<int, 2>{0, 1}));
  EXPECT_EQ(g.cells[1], (std::array<int, 2>{1, 1}));
}

TEST(Vdf, EmptyIsZero) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  const Eigen::MatrixXd f = build_vdf_from_boxes({}, g);
  EXPECT_EQ(f.rows(), g.count());
  EXPECT_EQ(f.cols(), 4);
  EXPECT_TRUE(f.isZero(0.0));
}

TEST(Vdf, SingleCarRow) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  const std::vector<PlacedBox> boxes{box_at(3.0, 6.25, VehicleKind::kCar, 0.0)};
  const Eigen::MatrixXd f = build_vdf_from_boxes(boxes, g);
  const int row = g.cell_of(3.0, 6.25);
  EXPECT_DOUBLE_EQ(f(row, 0), 3.71 / 11.08);
  EXPECT_DOUBLE_EQ(f(row, 1), 1.79 / 3.25);
  EXPECT_DOUBLE_EQ(f(row, 2), 1.55 / 3.33);
  EXPECT_DOUBLE_EQ(f(row, 3), 0.0);
  EXPECT_EQ((f.array() != 0.0).count(), 3);
}

TEST(Vdf, CarAndBusShareCellTakeMaxAndMeanAzimuth) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  const std::vector<PlacedBox> boxes{box_at(1.0, 6.5, VehicleKind::kCar, 0.4),
                                     box_at(9.0, 7.5, VehicleKind::kBus, 0.2)};
  const Eigen::MatrixXd f = build_vdf_from_boxes(boxes, g);
  const int row = g.cell_of(1.0, 6.5);
  ASSERT_EQ(row, g.cell_of(9.0, 7.5));
  EXPECT_DOUBLE_EQ(f(row, 0), 1.0);
  EXPECT_DOUBLE_EQ(f(row, 1), 1.0);
  EXPECT_DOUBLE_EQ(f(row, 2), 1.0);
  EXPECT_NEAR(f(row, 3), 0.3, 1e-15);
}

TEST(Vdf, OffLaneBoxesIgnoredAndSizesClamped) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  PlacedBox huge = box_at(0.5, 3.0, VehicleKind::kBus, 0.0);
  huge.size *= 2.0;
  const std::vector<PlacedBox> boxes{box_at(0.0, -20.0, VehicleKind::kCar, 0.0), huge};
  const Eigen::MatrixXd f = build_vdf_from_boxes(boxes, g);
  EXPECT_LE(f.leftCols(3).maxCoeff(), 1.0);
  EXPECT_EQ((f.array() != 0.0).count(), 3);
}

TEST(Vdf, OrderInvariant) {
  const GridConfig g = make_grid(ScenarioConfig::defaults().lanes);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-20.0, 20.0), y(1.0, 22.0), a(-kPi, kPi);
  std::vector<PlacedBox> boxes;
  for (int i = 0; i < 40; ++i) boxes.push_back(box_at(x(rng), y(rng), VehicleKind::kVan, a(rng)));
  const Eigen::MatrixXd f = build_vdf_from_boxes(boxes, g);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(boxes.begin(), boxes.end(), rng);
    EXPECT_EQ(build_vdf_from_boxes(boxes, g), f);
  }
}

TEST(Vdf, DetectionPathMatchesGroundTruthBoxes) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  const GridConfig g = make_grid(c.lanes);
  const auto ring = camera_ring_for(c);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto snaps = sample_trajectory(spawn_scenario(seed, c));
    for (const Snapshot& s : {snaps.front(), snaps.back()}) {
      std::vector<Detection> dets;
      for (const auto& cam : detect_vehicles(s, ring, {}, 0)) {
        dets.insert(dets.end(), cam.begin(), cam.end());
      }
      std::vector<PlacedBox> truth;
      for (const auto& d : dets) {
        const Cuboid& b = s.boxes[d.object];
        truth.push_back({b.center, Vec3(b.length, b.width, b.height), b.azimuth});
      }
      const Eigen::MatrixXd from_detections = build_vdf(dets, ring, s.ms_location, g);
      const Eigen::MatrixXd from_truth = build_vdf_from_boxes(truth, g);
      EXPECT_LE((from_detections - from_truth).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

}  // namespace
}  // namespace beamlab
