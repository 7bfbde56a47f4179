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

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "beamlab/geometry.hpp"

namespace beamlab {

enum class VehicleKind : std::uint8_t { kCar = 0, kVan = 1, kBus = 2 };

struct VehicleDims {
  std::string_view name;
  double length;
  double width;
  double height;
};

/// Table of the three simulated vehicle classes (meters).
const VehicleDims& vehicle_dims(VehicleKind kind);
VehicleKind vehicle_kind_from_name(std::string_view name);

/// Largest length / width / height over all vehicle kinds (the bus).
Vec3 max_vehicle_dims();

/// A straight one-way lane. Vehicles travel from `start` toward `end`.
struct LaneSpec {
  int id = 0;
  Vec2 start = Vec2::Zero();
  Vec2 end = Vec2::Zero();
  double width = 3.5;

  Vec2 direction() const;
  double length() const;
  /// Heading azimuth of vehicles driving in this lane.
  double azimuth() const;
  /// Whether the planar point lies in the lane rectangle.
  bool contains(const Vec2& p) const;
};

struct AxisRect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(const Vec2& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
};

struct ScenarioConfig {
  std::vector<LaneSpec> lanes;
  int ms_lane = 1;
  /// Vehicles spawned per lane, not counting the MS.
  std::vector<int> vehicles_per_lane;
  double speed_min = 8.0;
  double speed_max = 15.0;
  double gap_min = 2.0;
  std::vector<Cuboid> buildings;
  AxisRect coverage;
  /// RSU array position in the RSU frame; the frame origin is its ground
  /// point, so only the height is normally nonzero.
  Vec3 rsu_position = Vec3(0.0, 0.0, 3.0);
  /// Longitudinal lane coordinate of the MS center at t = 0.
  double ms_start_s = 0.0;
  double snapshot_interval = 0.05;
  double horizon = 30.0;
  int num_cameras = 4;
  double camera_above_roof = 0.5;
  double antenna_above_roof = 0.05;
  int image_width = 320;
  int image_height = 120;

  /// Six parallel lanes along the RSU X axis, street 1 nearest the RSU,
  /// a 30 m x 15 m coverage area with the RSU at the middle of its long
  /// edge, and building rows on both sides of the road.
  static ScenarioConfig defaults();
  void validate() const;
};

struct Vehicle {
  VehicleKind kind = VehicleKind::kCar;
  int lane = 0;
  /// Longitudinal position of the center along the lane, from its start.
  double s = 0.0;
  double speed = 0.0;
  double desired_speed = 0.0;
  bool active = true;

  bool operator==(const Vehicle&) const = default;
};

struct Scenario {
  std::uint64_t seed = 0;
  ScenarioConfig config;
  std::vector<Vehicle> vehicles;
  int ms_index = 0;
  std::vector<CameraMount> camera_mounts;
  double time = 0.0;

  Cuboid vehicle_box(int index) const;
  Pose2D vehicle_pose(int index) const;
  Pose2D ms_pose() const { return vehicle_pose(ms_index); }
  /// Position of the MS antenna array in the RSU frame.
  Vec3 ms_antenna() const;
};

bool same_scenario(const Scenario& a, const Scenario& b);

/// Camera ring: `count` cameras at azimuths 0, 360/count, ... degrees,
/// each covering 360/count degrees, mounted `height` meters above the MS
/// ground origin.
std::vector<CameraMount> make_camera_ring(int count, double height,
                                          int image_width, int image_height);

/// The ring used for an MS car under `config`.
std::vector<CameraMount> camera_ring_for(const ScenarioConfig& config);

/// Random, non-overlapping initial placement; fully determined by `seed`.
/// Throws std::invalid_argument if a lane cannot hold its vehicles.
Scenario spawn_scenario(std::uint64_t seed, const ScenarioConfig& config);

/// Constant-speed advance with a car-following clamp that keeps every
/// follower at least gap_min behind its leader. Vehicles whose front
/// passes the lane end are deactivated.
Scenario step(const Scenario& scenario, double dt);

/// Scene state at one camera shot.
struct Snapshot {
  int index = 0;        // 1-based position in the trajectory
  long step = 0;        // number of T_d steps since t = 0
  double time = 0.0;    // step * T_d
  std::vector<Vehicle> vehicles;
  std::vector<Cuboid> boxes;  // one per vehicle, RSU frame
  int ms_index = 0;
  Pose2D ms_pose_rcs;
  Vec2 ms_location = Vec2::Zero();
  Vec3 ms_antenna = Vec3::Zero();

  /// Pose of the MS frame: origin below the MS center, axes parallel to
  /// the RSU frame whatever the heading.
  Pose2D ms_frame() const { return {ms_location.x(), ms_location.y(), 0.0}; }
  /// Boxes of active vehicles other than the MS.
  std::vector<Cuboid> other_vehicle_boxes() const;
};

Snapshot make_snapshot(const Scenario& scenario, long step_index, int index);

/// Steps the scene at T_d and keeps exactly the shots where the MS center
/// is inside the coverage rectangle, stopping once it leaves. Throws
/// std::runtime_error if the MS never enters within the horizon.
std::vector<Snapshot> sample_trajectory(const Scenario& scenario);

}  // namespace beamlab
