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

#include "beamlab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beamlab/scenario.hpp"
#include "binary_io.hpp"

namespace beamlab {

void ChannelConfig::validate() const {
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("channel.carrier_hz: must be positive");
  if (num_subcarriers < 1) throw std::invalid_argument("channel.num_subcarriers: must be >= 1");
  if (!(subcarrier_spacing_hz > 0.0)) {
    throw std::invalid_argument("channel.subcarrier_spacing_hz: must be positive");
  }
  if (num_bs_antennas < 1 || num_ms_antennas < 1) {
    throw std::invalid_argument("channel: antenna counts must be >= 1");
  }
  if (max_paths < 1) throw std::invalid_argument("channel.max_paths: must be >= 1");
  if (max_reflections < 0 || max_reflections > 1) {
    throw std::invalid_argument("channel.max_reflections: only 0 or 1 supported");
  }
  for (double g : {metal_reflection, concrete_reflection, ground_reflection}) {
    if (!(g > 0.0 && g <= 1.0)) {
      throw std::invalid_argument("channel: reflection magnitudes must lie in (0, 1]");
    }
  }
  if (!(noise_power > 0.0) || !(subcarrier_power > 0.0)) {
    throw std::invalid_argument("channel: noise and subcarrier power must be positive");
  }
}

Eigen::VectorXcd steering_vector(double phi, int n) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  Eigen::VectorXcd a(n);
  const double s = kPi * std::sin(phi);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) a[i] = std::polar(norm, s * i);
  return a;
}

std::vector<Reflector> scene_reflectors(const Scenario& scenario,
                                        const Snapshot& snapshot) {
  std::vector<Reflector> out;
  for (const auto& b : scenario.config.buildings) out.push_back({b, Material::kConcrete});
  for (const auto& box : snapshot.other_vehicle_boxes()) {
    out.push_back({box, Material::kMetal});
  }
  return out;
}

namespace {

// Azimuth of a direction as seen by a ULA laid along the street (RSU X axis).
double ula_azimuth(const Vec3& dir) {
  const double h = std::hypot(dir.x(), dir.y());
  if (h == 0.0) return 0.0;
  return std::asin(std::clamp(dir.x() / h, -1.0, 1.0));
}

bool blocked_except(const Vec3& a, const Vec3& b, std::span<const Reflector> scene,
                    std::size_t skip) {
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (i != skip && segment_hits_cuboid(a, b, scene[i].box)) return true;
  }
  return false;
}

PathParam make_path(const ChannelConfig& cfg, double distance, double reflection,
                    int bounces, const Vec3& depart_dir, const Vec3& arrive_dir,
                    PathKind kind) {
  const double lambda = cfg.wavelength();
  const double amplitude = lambda / (4.0 * kPi * distance) * reflection;
  // Keep only the fractional wavelength count so the phase stays accurate.
  const double cycles = distance / lambda;
  const double frac = cycles - std::floor(cycles);
  const double phase = -2.0 * kPi * frac + kPi * bounces;
  PathParam p;
  p.gain = std::polar(amplitude, phase);
  p.delay = distance / kSpeedOfLight;
  p.aod = ula_azimuth(depart_dir);
  p.aoa = ula_azimuth(arrive_dir);
  p.kind = kind;
  return p;
}

}  // namespace

std::vector<PathParam> trace_paths(std::span<const Reflector> scene, const Vec3& tx,
                                   const Vec3& rx, const ChannelConfig& cfg) {
  if ((tx - rx).norm() == 0.0) throw std::invalid_argument("trace_paths: tx == rx");
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<PathParam> paths;

  if (!blocked_except(tx, rx, scene, kNone)) {
    paths.push_back(make_path(cfg, (rx - tx).norm(), 1.0, 0, rx - tx, tx - rx,
                              PathKind::kLos));
  }

  if (cfg.max_reflections >= 1) {
    // Ground plane z = 0.
    if (tx.z() > 0.0 && rx.z() > 0.0) {
      const Vec3 image(tx.x(), tx.y(), -tx.z());
      const double t = tx.z() / (tx.z() + rx.z());
      const Vec3 bounce = image + t * (rx - image);
      const Vec3 p(bounce.x(), bounce.y(), 0.0);
      if (!blocked_except(tx, p, scene, kNone) && !blocked_except(p, rx, scene, kNone)) {
        paths.push_back(make_path(cfg, (rx - image).norm(), cfg.ground_reflection, 1,
                                  p - tx, p - rx, PathKind::kGroundReflection));
      }
    }

    for (std::size_t i = 0; i < scene.size(); ++i) {
      const Cuboid& c = scene[i].box;
      const Eigen::Matrix3d r = frame_rotation(c.azimuth);
      const Vec3 half(0.5 * c.width, 0.5 * c.length, 0.5 * c.height);
      for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {-1, 1}) {
          if (axis == 2 && sign < 0) continue;  // bottom face rests on the ground
          Vec3 local_n = Vec3::Zero();
          local_n[axis] = sign;
          const Vec3 n = r * local_n;
          const Vec3 q = c.center + r * (local_n * half[axis]);
          const double dt = (tx - q).dot(n);
          const double dr = (rx - q).dot(n);
          if (!(dt > 0.0 && dr > 0.0)) continue;
          const Vec3 image = tx - 2.0 * dt * n;
          const double t = dt / (dt + dr);
          const Vec3 bounce = image + t * (rx - image);
          const Vec3 local = r.transpose() * (bounce - c.center);
          bool on_face = true;
          for (int b = 0; b < 3; ++b) {
            if (b != axis && !(std::abs(local[b]) < half[b])) on_face = false;
          }
          if (!on_face) continue;
          if (blocked_except(tx, bounce, scene, i) || blocked_except(bounce, rx, scene, i)) {
            continue;
          }
          paths.push_back(make_path(cfg, (rx - image).norm(),
                                    cfg.reflection_magnitude(scene[i].material), 1,
                                    bounce - tx, bounce - rx, PathKind::kFaceReflection));
        }
      }
    }
  }

  std::stable_sort(paths.begin(), paths.end(), [](const PathParam& a, const PathParam& b) {
    return std::abs(a.gain) > std::abs(b.gain);
  });
  if (static_cast<int>(paths.size()) > cfg.max_paths) paths.resize(cfg.max_paths);
  return paths;
}

ChannelMatrices assemble_channel(std::span<const PathParam> paths,
                                 const ChannelConfig& cfg) {
  ChannelMatrices h(cfg.num_subcarriers,
                    Eigen::MatrixXcd::Zero(cfg.num_ms_antennas, cfg.num_bs_antennas));
  for (const auto& p : paths) {
    const Eigen::VectorXcd ar = steering_vector(p.aoa, cfg.num_ms_antennas);
    const Eigen::RowVectorXcd at_h = steering_vector(p.aod, cfg.num_bs_antennas).adjoint();
    const Eigen::MatrixXcd outer = ar * at_h;
    for (int k = 0; k < cfg.num_subcarriers; ++k) {
      const cd c = p.gain * std::polar(1.0, -2.0 * kPi * cfg.subcarrier_offset_hz(k) * p.delay);
      h[k] += c * outer;
    }
  }
  return h;
}

double channel_energy(std::span<const PathParam> paths, const ChannelConfig& cfg) {
  const std::size_t n = paths.size();
  if (n == 0) return 0.0;
  // Gram entries <A_l, A_m> = (a_r,m^H a_r,l) (a_t,l^H a_t,m).
  std::vector<Eigen::VectorXcd> ar, at;
  for (const auto& p : paths) {
    ar.push_back(steering_vector(p.aoa, cfg.num_ms_antennas));
    at.push_back(steering_vector(p.aod, cfg.num_bs_antennas));
  }
  Eigen::MatrixXcd gram(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t m = 0; m < n; ++m) {
      gram(l, m) = ar[m].dot(ar[l]) * at[l].dot(at[m]);
    }
  }
  double total = 0.0;
  Eigen::VectorXcd c(n);
  for (int k = 0; k < cfg.num_subcarriers; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      c[l] = paths[l].gain *
             std::polar(1.0, -2.0 * kPi * cfg.subcarrier_offset_hz(k) * paths[l].delay);
    }
    // ||sum_l c_l A_l||^2 = sum_{l,m} c_l conj(c_m) <A_l, A_m>
    total += std::real(c.dot(gram.transpose() * c));
  }
  return total;
}

bool los_status(std::span<const Reflector> scene, const Vec3& tx, const Vec3& rx) {
  for (const auto& r : scene) {
    if (segment_hits_cuboid(tx, rx, r.box)) return false;
  }
  return true;
}

ChannelSnapshot synthesize_channel(std::span<const Reflector> scene, const Vec3& tx,
                                   const Vec3& rx, const ChannelConfig& cfg) {
  ChannelSnapshot out;
  out.paths = trace_paths(scene, tx, rx, cfg);
  out.h = assemble_channel(out.paths, cfg);
  out.los_flag = los_status(scene, tx, rx);
  return out;
}

double calibrate_noise_power(double total_energy, long num_snapshots,
                             const ChannelConfig& cfg) {
  if (num_snapshots <= 0 || !(total_energy > 0.0)) {
    throw std::invalid_argument("calibrate_noise_power: need positive energy and snapshot count");
  }
  const double snr = std::pow(10.0, cfg.target_snr_db / 10.0);
  return cfg.subcarrier_power * total_energy /
         (cfg.num_subcarriers * static_cast<double>(num_snapshots) * snr);
}

void write_channel_dump(std::ostream& out, int q, int r, const ChannelSnapshot& ch) {
  using detail::write_le;
  write_le<std::int32_t>(out, q);
  write_le<std::int32_t>(out, r);
  write_le<std::int32_t>(out, ch.los_flag ? 1 : 0);
  write_le<std::int32_t>(out, static_cast<std::int32_t>(ch.paths.size()));
  for (const auto& p : ch.paths) {
    write_le<double>(out, p.gain.real());
    write_le<double>(out, p.gain.imag());
    write_le<double>(out, p.delay);
    write_le<double>(out, p.aoa);
    write_le<double>(out, p.aod);
    write_le<double>(out, static_cast<double>(p.kind));
  }
  for (const auto& hk : ch.h) {
    for (Eigen::Index i = 0; i < hk.rows(); ++i) {
      for (Eigen::Index j = 0; j < hk.cols(); ++j) {
        write_le<float>(out, static_cast<float>(hk(i, j).real()));
        write_le<float>(out, static_cast<float>(hk(i, j).imag()));
      }
    }
  }
}

ChannelDumpEntry read_channel_dump(std::istream& in, int num_subcarriers, int n_ms,
                                   int n_bs) {
  using detail::read_le;
  ChannelDumpEntry e;
  e.q = read_le<std::int32_t>(in);
  e.r = read_le<std::int32_t>(in);
  e.channel.los_flag = read_le<std::int32_t>(in) != 0;
  const int count = read_le<std::int32_t>(in);
  if (count < 0) throw std::runtime_error("channel dump: negative path count");
  for (int i = 0; i < count; ++i) {
    PathParam p;
    const double re = read_le<double>(in);
    const double im = read_le<double>(in);
    p.gain = {re, im};
    p.delay = read_le<double>(in);
    p.aoa = read_le<double>(in);
    p.aod = read_le<double>(in);
    p.kind = static_cast<PathKind>(static_cast<int>(read_le<double>(in)));
    e.channel.paths.push_back(p);
  }
  e.channel.h.assign(num_subcarriers, Eigen::MatrixXcd(n_ms, n_bs));
  for (auto& hk : e.channel.h) {
    for (int i = 0; i < n_ms; ++i) {
      for (int j = 0; j < n_bs; ++j) {
        const float re = read_le<float>(in);
        const float im = read_le<float>(in);
        hk(i, j) = {re, im};
      }
    }
  }
  return e;
}

}  // namespace beamlab
