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

#include "beamlab/detection.hpp"

#include <gtest/gtest.h>

#include "beamlab/scenario.hpp"

namespace beamlab {
namespace {

Snapshot mid_snapshot(std::uint64_t seed) {
  const Scenario sc = spawn_scenario(seed, ScenarioConfig::defaults());
  const auto snaps = sample_trajectory(sc);
  return snaps[snaps.size() / 2];
}

TEST(CameraSector, FrontCameraOwnsPointsAhead) {
  const auto ring = make_camera_ring(4, 2.0, 320, 120);
  const Vec3 ahead(0.0, 10.0, 1.0);
  int owners = 0;
  for (int i = 0; i < 4; ++i) owners += in_camera_sector(ring[i], ahead);
  EXPECT_EQ(owners, 1);
  EXPECT_TRUE(in_camera_sector(ring[0], ahead));
  EXPECT_TRUE(in_camera_sector(ring[1], Vec3(10.0, 0.0, 0.0)));
  EXPECT_TRUE(in_camera_sector(ring[2], Vec3(0.0, -10.0, 0.0)));
}

TEST(DetectVehicles, EveryOtherVehicleExactlyOnce) {
  const Snapshot s = mid_snapshot(4);
  const auto ring = camera_ring_for(ScenarioConfig::defaults());
  const auto per_camera = detect_vehicles(s, ring, {}, 1);
  ASSERT_EQ(per_camera.size(), ring.size());
  std::vector<int> seen(s.vehicles.size(), 0);
  for (std::size_t i = 0; i < per_camera.size(); ++i) {
    for (const auto& d : per_camera[i]) {
      EXPECT_EQ(d.camera, static_cast<int>(i));
      ++seen[d.object];
      EXPECT_GT(d.center_ccs.y(), 0.0);  // in front of its camera
    }
  }
  for (std::size_t j = 0; j < s.vehicles.size(); ++j) {
    const bool expected = static_cast<int>(j) != s.ms_index && s.vehicles[j].active;
    EXPECT_EQ(seen[j], expected ? 1 : 0) << "vehicle " << j;
  }
}

TEST(DetectVehicles, ZeroNoiseInvertsToGroundTruth) {
  const Snapshot s = mid_snapshot(5);
  const auto ring = camera_ring_for(ScenarioConfig::defaults());
  for (const auto& cam : detect_vehicles(s, ring, {}, 1)) {
    for (const auto& d : cam) {
      const PlacedBox b = detection_to_rcs(d, ring, s.ms_location);
      const Cuboid& truth = s.boxes[d.object];
      EXPECT_LE((b.center_rcs - truth.center).norm(), 1e-12);
      EXPECT_NEAR(wrap_angle(b.azimuth_rcs - truth.azimuth), 0.0, 1e-12);
      EXPECT_EQ(b.size, Vec3(truth.length, truth.width, truth.height));
    }
  }
}

TEST(DetectVehicles, DeterministicPerSeed) {
  const Snapshot s = mid_snapshot(6);
  const auto ring = camera_ring_for(ScenarioConfig::defaults());
  DetectionNoise noise{0.1, 0.05, 0.02};
  const auto a = detect_vehicles(s, ring, noise, 77);
  const auto b = detect_vehicles(s, ring, noise, 77);
  const auto c = detect_vehicles(s, ring, noise, 78);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].size(), b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      EXPECT_EQ(a[i][j].center_ccs, b[i][j].center_ccs);
      if (a[i][j].center_ccs != c[i][j].center_ccs) differs = true;
    }
  }
  EXPECT_TRUE(differs);
}

TEST(DetectVehicles, CenterNoiseHasHalfNormalMean) {
  // E|N(0, s^2)| = s sqrt(2 / pi) ~ 0.0798 for s = 0.1.
  Snapshot s;
  s.ms_location = Vec2(0, 0);
  s.ms_index = 0;
  s.vehicles.resize(2);
  s.boxes.resize(2);
  s.boxes[1].center = Vec3(0, 8, 0.8);
  s.boxes[1].length = 3.71;
  s.boxes[1].width = 1.79;
  s.boxes[1].height = 1.55;
  const auto ring = make_camera_ring(4, 2.0, 320, 120);
  const auto clean = detect_vehicles(s, ring, {}, 0)[0].at(0);
  DetectionNoise noise{0.1, 0.0, 0.0};
  double sum = 0.0;
  long n = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto d = detect_vehicles(s, ring, noise, seed)[0].at(0);
    for (int a = 0; a < 3; ++a) {
      sum += std::abs(d.center_ccs[a] - clean.center_ccs[a]);
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.1 * std::sqrt(2.0 / kPi), 0.002);
}

TEST(DetectionNoise, RejectsNegative) {
  DetectionNoise noise{-0.1, 0.0, 0.0};
  EXPECT_THROW(noise.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace beamlab
