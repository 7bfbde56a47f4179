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

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "beamlab/detection.hpp"
#include "beamlab/geometry.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

/// H x W x 3C single-precision image, row-major with channels innermost.
/// Camera i owns channels 3i .. 3i+2.
struct SceneImage {
  int height = 0;
  int width = 0;
  int channels = 0;
  double time = 0.0;
  std::vector<float> data;

  SceneImage() = default;
  SceneImage(int h, int w, int c, float fill = 0.0f)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  float& at(int v, int u, int c) {
    return data[(static_cast<std::size_t>(v) * width + u) * channels + c];
  }
  float at(int v, int u, int c) const {
    return data[(static_cast<std::size_t>(v) * width + u) * channels + c];
  }
};

struct SifStyle {
  float sky = 210.0f;
  float road = 90.0f;
  float building_base = 100.0f;
  float building_step = 25.0f;
};

/// Calls fn(u, v) for every pixel whose center lies inside the convex
/// polygon.
template <typename Fn>
void for_each_covered_pixel(const Polygon2& poly, int width, int height, Fn&& fn);

/// Vehicle mask value for a box of the given size:
/// (-255 l/L_max, -255 w/W_max, -255 h/H_max).
std::array<float, 3> size_triple(const Vec3& size, const Vec3& maxima = max_vehicle_dims());

/// Renders the C camera views. Background is flat-shaded sky, road and
/// buildings (all nonnegative); every detected vehicle is then painted with
/// its size triple, farthest first, so the nearest box wins each pixel.
/// Detections are mapped to the RSU frame through the MS location.
SceneImage build_sif(const Snapshot& snapshot, std::span<const CameraMount> mounts,
                     std::span<const Detection> detections,
                     std::span<const Cuboid> buildings, const SifStyle& style = {},
                     const Vec3& maxima = max_vehicle_dims());

/// Block-average pooling with `block` x `block` windows (edge windows are
/// partial). Channels are kept.
SceneImage pool_sif(const SceneImage& sif, int block);

/// S consecutive images stacked along a leading time axis, newest last.
struct SifSequence {
  int steps = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;  // steps x height x width x channels
};

/// Throws std::invalid_argument unless exactly `s` images with strictly
/// ascending times and equal shapes are given.
SifSequence build_seq(std::span<const SceneImage> sifs, int s);

template <typename Fn>
void for_each_covered_pixel(const Polygon2& poly, int width, int height, Fn&& fn) {
  if (poly.size() < 3) return;
  double y_lo = poly[0].y(), y_hi = poly[0].y();
  for (const auto& p : poly) {
    y_lo = std::min(y_lo, p.y());
    y_hi = std::max(y_hi, p.y());
  }
  const int v0 = std::max(0, static_cast<int>(std::floor(y_lo - 0.5)));
  const int v1 = std::min(height - 1, static_cast<int>(std::ceil(y_hi - 0.5)));
  for (int v = v0; v <= v1; ++v) {
    const double y = v + 0.5;
    double x_lo = 1e300, x_hi = -1e300;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& a = poly[i];
      const Vec2& b = poly[(i + 1) % poly.size()];
      if ((a.y() <= y && y <= b.y()) || (b.y() <= y && y <= a.y())) {
        if (a.y() == b.y()) {
          x_lo = std::min({x_lo, a.x(), b.x()});
          x_hi = std::max({x_hi, a.x(), b.x()});
        } else {
          const double x = a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
          x_lo = std::min(x_lo, x);
          x_hi = std::max(x_hi, x);
        }
      }
    }
    if (x_lo > x_hi) continue;
    const int u0 = std::max(0, static_cast<int>(std::ceil(x_lo - 0.5)));
    const int u1 = std::min(width - 1, static_cast<int>(std::floor(x_hi - 0.5)));
    for (int u = u0; u <= u1; ++u) fn(u, v);
  }
}

}  // namespace beamlab
