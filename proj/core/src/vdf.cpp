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
#include <cmath>
#include <stdexcept>

namespace beamlab {

int GridConfig::cell_of(double x, double y) const {
  const std::array<int, 2> key = {static_cast<int>(std::floor(x / cell_length)),
                                  static_cast<int>(std::floor(y / cell_width))};
  const auto less = [](const std::array<int, 2>& a, const std::array<int, 2>& b) {
    return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
  };
  const auto it = std::lower_bound(cells.begin(), cells.end(), key, less);
  if (it == cells.end() || *it != key) return -1;
  return static_cast<int>(it - cells.begin());
}

GridConfig make_grid(std::span<const LaneSpec> lanes, double cell_length,
                     double cell_width) {
  if (!(cell_length > 0.0 && cell_width > 0.0)) {
    throw std::invalid_argument("grid: cell sizes must be positive");
  }
  GridConfig g;
  g.cell_length = cell_length;
  g.cell_width = cell_width;
  for (const auto& lane : lanes) {
    const Vec2 d = lane.direction();
    const Vec2 n(-d.y(), d.x());
    const Vec2 hw = 0.5 * lane.width * n;
    const Polygon2 poly = {lane.start - hw, lane.end - hw, lane.end + hw, lane.start + hw};
    double x0 = poly[0].x(), x1 = x0, y0 = poly[0].y(), y1 = y0;
    for (const auto& p : poly) {
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
    for (int iy = static_cast<int>(std::floor(y0 / cell_width));
         iy <= static_cast<int>(std::floor(y1 / cell_width)); ++iy) {
      for (int ix = static_cast<int>(std::floor(x0 / cell_length));
           ix <= static_cast<int>(std::floor(x1 / cell_length)); ++ix) {
        const Vec2 origin(ix * cell_length, iy * cell_width);
        Polygon2 local;
        for (const auto& p : poly) local.push_back(p - origin);
        const Polygon2 clipped = clip_to_rect(local, cell_length, cell_width);
        if (clipped.size() >= 3 && std::abs(polygon_area(clipped)) > 1e-9) {
          g.cells.push_back({ix, iy});
        }
      }
    }
  }
  std::sort(g.cells.begin(), g.cells.end(), [](const auto& a, const auto& b) {
    return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
  });
  g.cells.erase(std::unique(g.cells.begin(), g.cells.end()), g.cells.end());
  return g;
}

Eigen::MatrixXd build_vdf_from_boxes(std::span<const PlacedBox> boxes, const GridConfig& grid,
                                     const Vec3& maxima) {
  if (!(maxima.minCoeff() > 0.0)) throw std::invalid_argument("build_vdf: maxima must be positive");
  const int g = grid.count();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(g, 4);
  std::vector<std::vector<double>> azimuths(g);
  for (const auto& b : boxes) {
    const int row = grid.cell_of(b.center_rcs.x(), b.center_rcs.y());
    if (row < 0) continue;
    // Noisy sizes may exceed the largest class; the feature stays in [0, 1].
    for (int a = 0; a < 3; ++a) {
      f(row, a) = std::max(f(row, a), std::min(1.0, b.size[a] / maxima[a]));
    }
    azimuths[row].push_back(b.azimuth_rcs);
  }
  for (int row = 0; row < g; ++row) {
    auto& az = azimuths[row];
    if (az.empty()) continue;
    // Sorting first makes the sum independent of detection order.
    std::sort(az.begin(), az.end());
    double sum = 0.0;
    for (double a : az) sum += a;
    f(row, 3) = sum / static_cast<double>(az.size());
  }
  return f;
}

Eigen::MatrixXd build_vdf(std::span<const Detection> detections,
                          std::span<const CameraMount> mounts, const Vec2& ms_location,
                          const GridConfig& grid, const Vec3& maxima) {
  std::vector<PlacedBox> boxes;
  boxes.reserve(detections.size());
  for (const auto& d : detections) boxes.push_back(detection_to_rcs(d, mounts, ms_location));
  return build_vdf_from_boxes(boxes, grid, maxima);
}

}  // namespace beamlab
