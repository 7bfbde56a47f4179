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

#include "beamlab/sif.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace beamlab {

std::array<float, 3> size_triple(const Vec3& size, const Vec3& maxima) {
  return {static_cast<float>(-255.0 * size.x() / maxima.x()),
          static_cast<float>(-255.0 * size.y() / maxima.y()),
          static_cast<float>(-255.0 * size.z() / maxima.z())};
}

namespace {

struct Layer {
  Polygon2 hull;
  double depth = 0.0;
  std::array<float, 3> value{};
};

// Paints layers farthest first so nearer ones overwrite them.
void paint(SceneImage& img, int camera, std::vector<Layer>& layers) {
  std::stable_sort(layers.begin(), layers.end(),
                   [](const Layer& a, const Layer& b) { return a.depth > b.depth; });
  for (const auto& layer : layers) {
    for_each_covered_pixel(layer.hull, img.width, img.height, [&](int u, int v) {
      for (int c = 0; c < 3; ++c) img.at(v, u, 3 * camera + c) = layer.value[c];
    });
  }
}

}  // namespace

SceneImage build_sif(const Snapshot& snapshot, std::span<const CameraMount> mounts,
                     std::span<const Detection> detections,
                     std::span<const Cuboid> buildings, const SifStyle& style,
                     const Vec3& maxima) {
  if (mounts.empty()) throw std::invalid_argument("build_sif: no cameras");
  const int h = mounts[0].image_height;
  const int w = mounts[0].image_width;
  for (const auto& m : mounts) {
    if (m.image_height != h || m.image_width != w) {
      throw std::invalid_argument("build_sif: cameras must share one resolution");
    }
  }
  const int cams = static_cast<int>(mounts.size());
  SceneImage img(h, w, 3 * cams);
  img.time = snapshot.time;
  const Pose2D frame = snapshot.ms_frame();

  std::vector<Cuboid> vehicles;
  vehicles.reserve(detections.size());
  for (const auto& d : detections) {
    const PlacedBox b = detection_to_rcs(d, mounts, snapshot.ms_location);
    Cuboid c;
    c.center = b.center_rcs;
    c.length = b.size.x();
    c.width = b.size.y();
    c.height = b.size.z();
    c.azimuth = b.azimuth_rcs;
    vehicles.push_back(c);
  }

  for (int i = 0; i < cams; ++i) {
    const CameraMount& cam = mounts[i];
    for (int v = 0; v < h; ++v) {
      const float bg = (v + 0.5 < 0.5 * h) ? style.sky : style.road;
      for (int u = 0; u < w; ++u) {
        for (int c = 0; c < 3; ++c) img.at(v, u, 3 * i + c) = bg;
      }
    }

    std::vector<Layer> background;
    for (std::size_t b = 0; b < buildings.size(); ++b) {
      Layer layer;
      layer.hull = project_cuboid(cam, frame, buildings[b]);
      if (layer.hull.empty()) continue;
      layer.depth = rcs_to_camera(cam, frame, buildings[b].center).y();
      const float shade = style.building_base + style.building_step * static_cast<float>(b % 5);
      layer.value = {shade, shade, shade};
      background.push_back(std::move(layer));
    }
    paint(img, i, background);

    std::vector<Layer> masks;
    for (const auto& box : vehicles) {
      Layer layer;
      layer.hull = project_cuboid(cam, frame, box);
      if (layer.hull.empty()) continue;
      layer.depth = rcs_to_camera(cam, frame, box.center).y();
      layer.value = size_triple(Vec3(box.length, box.width, box.height), maxima);
      masks.push_back(std::move(layer));
    }
    paint(img, i, masks);
  }
  return img;
}

SceneImage pool_sif(const SceneImage& sif, int block) {
  if (block < 1) throw std::invalid_argument("pool_sif: block must be >= 1");
  const int ph = (sif.height + block - 1) / block;
  const int pw = (sif.width + block - 1) / block;
  SceneImage out(ph, pw, sif.channels);
  out.time = sif.time;
  std::vector<double> acc(sif.channels);
  for (int pv = 0; pv < ph; ++pv) {
    for (int pu = 0; pu < pw; ++pu) {
      std::fill(acc.begin(), acc.end(), 0.0);
      int n = 0;
      for (int v = pv * block; v < std::min(sif.height, (pv + 1) * block); ++v) {
        for (int u = pu * block; u < std::min(sif.width, (pu + 1) * block); ++u) {
          for (int c = 0; c < sif.channels; ++c) acc[c] += sif.at(v, u, c);
          ++n;
        }
      }
      for (int c = 0; c < sif.channels; ++c) out.at(pv, pu, c) = static_cast<float>(acc[c] / n);
    }
  }
  return out;
}

SifSequence build_seq(std::span<const SceneImage> sifs, int s) {
  if (s < 1) throw std::invalid_argument("build_seq: S must be >= 1");
  if (static_cast<int>(sifs.size()) != s) {
    throw std::invalid_argument("build_seq: expected exactly S images");
  }
  SifSequence seq;
  seq.steps = s;
  seq.height = sifs[0].height;
  seq.width = sifs[0].width;
  seq.channels = sifs[0].channels;
  for (int p = 0; p < s; ++p) {
    const auto& img = sifs[p];
    if (img.height != seq.height || img.width != seq.width || img.channels != seq.channels) {
      throw std::invalid_argument("build_seq: image shapes differ");
    }
    if (p > 0 && !(img.time > sifs[p - 1].time)) {
      throw std::invalid_argument("build_seq: times must be strictly ascending");
    }
    seq.data.insert(seq.data.end(), img.data.begin(), img.data.end());
  }
  return seq;
}

}  // namespace beamlab
