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

#include "beamlab/scenario.hpp"

#include <gtest/gtest.h>

namespace beamlab {
namespace {

TEST(ScenarioConfig, DefaultsDescribeTheStreet) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  ASSERT_EQ(c.lanes.size(), 6u);
  EXPECT_DOUBLE_EQ(c.lanes[0].start.y(), 2.75);
  EXPECT_DOUBLE_EQ(c.lanes[1].start.y(), 6.25);
  EXPECT_DOUBLE_EQ(c.lanes[1].azimuth(), kPi / 2);  // toward +X
  EXPECT_DOUBLE_EQ(std::abs(c.lanes[0].azimuth()), kPi / 2);
  EXPECT_LT(c.lanes[0].direction().x(), 0.0);
  EXPECT_DOUBLE_EQ(c.rsu_position.z(), 3.0);
  EXPECT_DOUBLE_EQ(c.snapshot_interval, 0.05);
  EXPECT_EQ(c.num_cameras, 4);
  EXPECT_EQ(c.image_width, 320);
  EXPECT_EQ(c.image_height, 120);
}

TEST(ScenarioConfig, RejectsBadValues) {
  ScenarioConfig c = ScenarioConfig::defaults();
  c.ms_lane = 9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ScenarioConfig::defaults();
  c.vehicles_per_lane.pop_back();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ScenarioConfig::defaults();
  c.speed_min = 20.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Lane, ContainsAndDirection) {
  LaneSpec lane;
  lane.start = Vec2(10, 2);
  lane.end = Vec2(-10, 2);
  lane.width = 3.5;
  EXPECT_DOUBLE_EQ(lane.length(), 20.0);
  EXPECT_TRUE(lane.direction().isApprox(Vec2(-1, 0)));
  EXPECT_TRUE(lane.contains(Vec2(0, 3.7)));
  EXPECT_FALSE(lane.contains(Vec2(0, 3.8)));
  EXPECT_FALSE(lane.contains(Vec2(11, 2)));
}

TEST(VehicleDims, TableAndMaxima) {
  EXPECT_EQ(vehicle_kind_from_name("bus"), VehicleKind::kBus);
  EXPECT_THROW(vehicle_kind_from_name("tram"), std::invalid_argument);
  const Vec3 m = max_vehicle_dims();
  for (auto k : {VehicleKind::kCar, VehicleKind::kVan, VehicleKind::kBus}) {
    EXPECT_LE(vehicle_dims(k).length, m.x());
    EXPECT_LE(vehicle_dims(k).width, m.y());
    EXPECT_LE(vehicle_dims(k).height, m.z());
  }
}

TEST(Spawn, DeterministicPerSeed) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  const Scenario a = spawn_scenario(42, c);
  const Scenario b = spawn_scenario(42, c);
  const Scenario other = spawn_scenario(43, c);
  EXPECT_TRUE(same_scenario(a, b));
  EXPECT_FALSE(same_scenario(a, other));
}

TEST(Spawn, MsIsACarAndNothingOverlaps) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Scenario sc = spawn_scenario(seed, c);
    EXPECT_EQ(sc.vehicles[sc.ms_index].kind, VehicleKind::kCar);
    EXPECT_EQ(sc.vehicles[sc.ms_index].lane, c.ms_lane);
    int total = 0;
    for (int n : c.vehicles_per_lane) total += n;
    EXPECT_EQ(static_cast<int>(sc.vehicles.size()), total + 1);
    for (std::size_t i = 0; i < sc.vehicles.size(); ++i) {
      for (std::size_t j = i + 1; j < sc.vehicles.size(); ++j) {
        EXPECT_FALSE(footprints_overlap(sc.vehicle_box(static_cast<int>(i)),
                                        sc.vehicle_box(static_cast<int>(j))))
            << "seed " << seed << " vehicles " << i << ", " << j;
      }
    }
  }
}

TEST(Spawn, OverfullLaneIsRejected) {
  ScenarioConfig c = ScenarioConfig::defaults();
  c.vehicles_per_lane[3] = 40;  // 40 vehicles cannot fit in 120 m
  EXPECT_THROW(spawn_scenario(1, c), std::invalid_argument);
}

TEST(Step, KeepsGapAndMovesForward) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  Scenario sc = spawn_scenario(7, c);
  for (int k = 0; k < 400; ++k) {
    const Scenario next = step(sc, c.snapshot_interval);
    for (std::size_t i = 0; i < sc.vehicles.size(); ++i) {
      if (!sc.vehicles[i].active) {
        EXPECT_FALSE(next.vehicles[i].active);
        continue;
      }
      EXPECT_GE(next.vehicles[i].s, sc.vehicles[i].s);
      EXPECT_LE(next.vehicles[i].speed, next.vehicles[i].desired_speed);
    }
    for (std::size_t i = 0; i < next.vehicles.size(); ++i) {
      for (std::size_t j = i + 1; j < next.vehicles.size(); ++j) {
        const auto& a = next.vehicles[i];
        const auto& b = next.vehicles[j];
        if (!a.active || !b.active || a.lane != b.lane) continue;
        const double gap = std::abs(a.s - b.s) - 0.5 * vehicle_dims(a.kind).length -
                           0.5 * vehicle_dims(b.kind).length;
        EXPECT_GE(gap, c.gap_min - 1e-9);
      }
    }
    sc = next;
  }
  EXPECT_NEAR(sc.time, 400 * c.snapshot_interval, 1e-9);
}

TEST(Trajectory, SnapshotsStayInCoverage) {
  const ScenarioConfig c = ScenarioConfig::defaults();
  const Scenario sc = spawn_scenario(3, c);
  const auto snaps = sample_trajectory(sc);
  ASSERT_FALSE(snaps.empty());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const Snapshot& s = snaps[i];
    EXPECT_EQ(s.index, static_cast<int>(i) + 1);
    EXPECT_TRUE(c.coverage.contains(s.ms_location));
    EXPECT_DOUBLE_EQ(s.time, s.step * c.snapshot_interval);
    if (i > 0) {
      EXPECT_EQ(s.step, snaps[i - 1].step + 1);
    }
    EXPECT_GT(s.ms_antenna.z(), vehicle_dims(VehicleKind::kCar).height);
    EXPECT_EQ(s.ms_frame().azimuth, 0.0);
    EXPECT_EQ(s.other_vehicle_boxes().size() + 1,
              static_cast<std::size_t>(std::count_if(
                  s.vehicles.begin(), s.vehicles.end(), [](const Vehicle& v) { return v.active; })));
  }
}

TEST(Trajectory, MsOutsideCoverageForeverThrows) {
  ScenarioConfig c = ScenarioConfig::defaults();
  c.coverage = {100.0, 110.0, 0.0, 15.0};
  EXPECT_THROW(sample_trajectory(spawn_scenario(1, c)), std::runtime_error);
}

TEST(CameraRing, FourCamerasTileTheCircle) {
  const auto ring = make_camera_ring(4, 2.0, 320, 120);
  ASSERT_EQ(ring.size(), 4u);
  EXPECT_NO_THROW(validate_camera_ring(ring));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(ring[i].azimuth_in_mcs, wrap_angle(i * kPi / 2), 1e-15);
    EXPECT_DOUBLE_EQ(ring[i].hfov, kPi / 2);
    EXPECT_DOUBLE_EQ(ring[i].offset_in_mcs.z(), 2.0);
  }
}

}  // namespace
}  // namespace beamlab
