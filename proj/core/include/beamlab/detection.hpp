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
#include <span>
#include <vector>

#include "beamlab/geometry.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

/// A 3D box reported by one camera, in that camera's frame.
struct Detection {
  int camera = 0;
  int object = 0;    // index into Snapshot::vehicles
  Vec3 size = Vec3::Zero();  // length, width, height
  Vec3 center_ccs = Vec3::Zero();
  double azimuth_ccs = 0.0;
};

/// Standard deviations of the additive Gaussian detector errors.
struct DetectionNoise {
  double center = 0.0;   // meters, per coordinate
  double size = 0.0;     // meters, per dimension
  double azimuth = 0.0;  // radians

  void validate() const;
};

/// Whether an MS-frame point falls in the camera's horizontal sector
/// [-hfov/2, hfov/2) around its optical axis.
bool in_camera_sector(const CameraMount& mount, const Vec3& p_mcs);

/// Ground-truth detector: every active vehicle except the MS is reported by
/// the camera whose sector contains its center, with optional noise drawn
/// from a generator seeded by `seed`. Result is indexed by camera.
std::vector<std::vector<Detection>> detect_vehicles(const Snapshot& snapshot,
                                                    std::span<const CameraMount> mounts,
                                                    const DetectionNoise& noise,
                                                    std::uint64_t seed);

/// A detection mapped back to the RSU frame.
struct PlacedBox {
  Vec3 center_rcs = Vec3::Zero();
  Vec3 size = Vec3::Zero();
  double azimuth_rcs = 0.0;
};

PlacedBox detection_to_rcs(const Detection& d, std::span<const CameraMount> mounts,
                           const Vec2& ms_location);

}  // namespace beamlab
