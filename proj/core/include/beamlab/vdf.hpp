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

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "beamlab/detection.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

/// Quantization of the RSU ground plane into L_G x W_G cells. Cell
/// (ix, iy) covers ix*L_G <= x < (ix+1)*L_G and iy*W_G <= y < (iy+1)*W_G.
struct GridConfig {
  double cell_length = 11.7;  // along X
  double cell_width = 2.0;    // along Y
  /// Anchors (ix, iy) of the cells kept, sorted by iy then ix.
  std::vector<std::array<int, 2>> cells;

  int count() const { return static_cast<int>(cells.size()); }
  /// Row of the cell containing (x, y), or -1 if that cell is not kept.
  int cell_of(double x, double y) const;
};

/// Keeps every cell whose rectangle overlaps some lane with positive area.
GridConfig make_grid(std::span<const LaneSpec> lanes, double cell_length = 11.7,
                     double cell_width = 2.0);

/// G x 4 rows [l/L_max, w/W_max, h/H_max, mean azimuth] from boxes in the
/// RSU frame. Boxes outside every kept cell are ignored.
Eigen::MatrixXd build_vdf_from_boxes(std::span<const PlacedBox> boxes, const GridConfig& grid,
                                     const Vec3& maxima = max_vehicle_dims());

/// Maps camera detections to the RSU frame through the MS location, then
/// quantizes them.
Eigen::MatrixXd build_vdf(std::span<const Detection> detections,
                          std::span<const CameraMount> mounts, const Vec2& ms_location,
                          const GridConfig& grid, const Vec3& maxima = max_vehicle_dims());

}  // namespace beamlab
