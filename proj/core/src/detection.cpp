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

#include <cmath>
#include <random>
#include <stdexcept>

namespace beamlab {

void DetectionNoise::validate() const {
  if (!(center >= 0.0 && size >= 0.0 && azimuth >= 0.0)) {
    throw std::invalid_argument("detection noise: standard deviations must be >= 0");
  }
}

bool in_camera_sector(const CameraMount& mount, const Vec3& p_mcs) {
  const Vec3 rel = p_mcs - mount.offset_in_mcs;
  const double bearing = std::atan2(rel.x(), rel.y());
  const double off = wrap_angle(bearing - mount.azimuth_in_mcs);
  return off >= -0.5 * mount.hfov && off < 0.5 * mount.hfov;
}

std::vector<std::vector<Detection>> detect_vehicles(const Snapshot& snapshot,
                                                    std::span<const CameraMount> mounts,
                                                    const DetectionNoise& noise,
                                                    std::uint64_t seed) {
  noise.validate();
  std::vector<std::vector<Detection>> out(mounts.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vec3 ms_ground(snapshot.ms_location.x(), snapshot.ms_location.y(), 0.0);
  for (std::size_t j = 0; j < snapshot.vehicles.size(); ++j) {
    if (static_cast<int>(j) == snapshot.ms_index || !snapshot.vehicles[j].active) continue;
    const Cuboid& box = snapshot.boxes[j];
    const Vec3 p_mcs = rcs_to_mcs(box.center, ms_ground);
    for (std::size_t i = 0; i < mounts.size(); ++i) {
      if (!in_camera_sector(mounts[i], p_mcs)) continue;
      const PlacedPoint c = mcs_to_ccs(p_mcs, box.azimuth, mounts[i]);
      Detection d;
      d.camera = static_cast<int>(i);
      d.object = static_cast<int>(j);
      d.center_ccs = c.position;
      d.azimuth_ccs = c.azimuth;
      d.size = Vec3(box.length, box.width, box.height);
      if (noise.center > 0.0) {
        for (int a = 0; a < 3; ++a) d.center_ccs[a] += noise.center * gauss(rng);
      }
      if (noise.size > 0.0) {
        for (int a = 0; a < 3; ++a) {
          d.size[a] = std::max(1e-3, d.size[a] + noise.size * gauss(rng));
        }
      }
      if (noise.azimuth > 0.0) {
        d.azimuth_ccs = wrap_angle(d.azimuth_ccs + noise.azimuth * gauss(rng));
      }
      out[i].push_back(d);
      break;  // sectors do not overlap
    }
  }
  return out;
}

PlacedBox detection_to_rcs(const Detection& d, std::span<const CameraMount> mounts,
                           const Vec2& ms_location) {
  if (d.camera < 0 || d.camera >= static_cast<int>(mounts.size())) {
    throw std::out_of_range("detection_to_rcs: camera index out of range");
  }
  const PlacedPoint m = ccs_to_mcs(d.center_ccs, d.azimuth_ccs, mounts[d.camera]);
  PlacedBox b;
  b.center_rcs = mcs_to_rcs(m.position, Vec3(ms_location.x(), ms_location.y(), 0.0));
  b.size = d.size;
  b.azimuth_rcs = m.azimuth;
  return b;
}

}  // namespace beamlab
