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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "beamlab/geometry.hpp"

namespace beamlab {

struct Scenario;
struct Snapshot;

using cd = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;

enum class PathKind : std::uint8_t { kLos = 0, kGroundReflection = 1, kFaceReflection = 2 };
enum class Material : std::uint8_t { kConcrete = 0, kMetal = 1 };

struct PathParam {
  cd gain;
  double delay = 0.0;  // seconds
  double aoa = 0.0;    // azimuth at the MS array, radians from broadside
  double aod = 0.0;    // azimuth at the RSU array, radians from broadside
  PathKind kind = PathKind::kLos;
};

struct Reflector {
  Cuboid box;
  Material material = Material::kConcrete;
};

struct ChannelConfig {
  double carrier_hz = 28e9;
  int num_subcarriers = 16;
  double subcarrier_spacing_hz = 10e6;
  int num_bs_antennas = 64;
  int num_ms_antennas = 64;
  int cyclic_prefix_len = 16;
  int max_reflections = 1;
  int max_paths = 5;
  double metal_reflection = 0.9;
  double concrete_reflection = 0.6;
  double ground_reflection = 0.6;
  /// sigma^2; normally set by calibrate_noise_power over a whole dataset.
  double noise_power = 1.0;
  /// P_k, identical on every subcarrier.
  double subcarrier_power = 1.0;
  double target_snr_db = 29.5;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double sampling_interval() const {
    return 1.0 / (num_subcarriers * subcarrier_spacing_hz);
  }
  /// Baseband offset of subcarrier k (0-based), centered on the carrier.
  double subcarrier_offset_hz(int k) const {
    return (k - num_subcarriers / 2) * subcarrier_spacing_hz;
  }
  double reflection_magnitude(Material m) const {
    return m == Material::kMetal ? metal_reflection : concrete_reflection;
  }
  void validate() const;
};

using ChannelMatrices = std::vector<Eigen::MatrixXcd>;

struct ChannelSnapshot {
  std::vector<PathParam> paths;
  ChannelMatrices h;  // K matrices, N_U x N_B
  bool los_flag = false;
};

/// (1/sqrt(n)) [1, e^{j pi sin phi}, ..., e^{j (n-1) pi sin phi}]^T
Eigen::VectorXcd steering_vector(double phi, int n);

/// Obstacles and reflectors of one shot: buildings (concrete) and every
/// active vehicle except the MS (metal).
std::vector<Reflector> scene_reflectors(const Scenario& scenario,
                                        const Snapshot& snapshot);

/// Line of sight plus first-order specular reflections (ground plane and
/// every visible cuboid face), strongest first, at most cfg.max_paths.
/// Empty when every candidate is blocked.
std::vector<PathParam> trace_paths(std::span<const Reflector> scene,
                                   const Vec3& tx, const Vec3& rx,
                                   const ChannelConfig& cfg);

/// H_k = sum_l alpha_l e^{-j 2 pi f_k tau_l} a_r(aoa_l) a_t(aod_l)^H.
ChannelMatrices assemble_channel(std::span<const PathParam> paths,
                                 const ChannelConfig& cfg);

/// sum_k ||H_k||_F^2 evaluated from the path list without forming H.
double channel_energy(std::span<const PathParam> paths, const ChannelConfig& cfg);

bool los_status(std::span<const Reflector> scene, const Vec3& tx, const Vec3& rx);

ChannelSnapshot synthesize_channel(std::span<const Reflector> scene, const Vec3& tx,
                                   const Vec3& rx, const ChannelConfig& cfg);

/// sigma^2 such that P * total_energy / (K * sigma^2 * num_snapshots) equals
/// the configured target SNR.
double calibrate_noise_power(double total_energy, long num_snapshots,
                             const ChannelConfig& cfg);

/// Binary channel dump, little-endian:
///   int32 q, int32 r, int32 los_flag, int32 path_count
///   path_count x 6 float64: gain_re, gain_im, delay, aoa, aod, kind
///   K * N_U * N_B complex64 (re, im float32), subcarrier-major, row-major
void write_channel_dump(std::ostream& out, int q, int r, const ChannelSnapshot& ch);

struct ChannelDumpEntry {
  int q = 0;
  int r = 0;
  ChannelSnapshot channel;
};

/// Reads one entry; N_U, N_B and K must be supplied by the caller.
ChannelDumpEntry read_channel_dump(std::istream& in, int num_subcarriers, int n_ms,
                                   int n_bs);

}  // namespace beamlab
