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

#include <random>
#include <sstream>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "beamlab/scenario.hpp"
#include "oracles.hpp"

namespace beamlab {
namespace {

ChannelConfig small_config() {
  ChannelConfig cfg;
  cfg.num_bs_antennas = 8;
  cfg.num_ms_antennas = 6;
  return cfg;
}

double max_abs_diff(const ChannelMatrices& a, const ChannelMatrices& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return m;
}

double max_abs(const ChannelMatrices& a) {
  double m = 0.0;
  for (const auto& hk : a) m = std::max(m, hk.cwiseAbs().maxCoeff());
  return m;
}

Reflector wall_along_y(double x_face, double y_lo, double y_hi, double height) {
  Reflector r;
  r.box.center = Vec3(x_face + 0.5, 0.5 * (y_lo + y_hi), 0.5 * height);
  r.box.length = y_hi - y_lo;
  r.box.width = 1.0;
  r.box.height = height;
  r.box.azimuth = 0.0;  // length along +Y
  r.material = Material::kMetal;
  return r;
}

TEST(SteeringVector, KnownValues) {
  const Eigen::VectorXcd a0 = steering_vector(0.0, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(a0[i] - cd(0.5, 0.0)), 0.0, 1e-15);
  const Eigen::VectorXcd a1 = steering_vector(kPi / 2, 2);
  EXPECT_NEAR(std::abs(a1[0] - cd(1 / std::sqrt(2.0), 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a1[1] - cd(-1 / std::sqrt(2.0), 0)), 0.0, 1e-15);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(steering_vector(ang(rng), 64).norm(), 1.0, 1e-12);
  EXPECT_THROW(steering_vector(0.0, 0), std::invalid_argument);
}

TEST(TracePaths, FreeSpaceHasLosAndGroundBounce) {
  const ChannelConfig cfg;
  const Vec3 tx(0, 0, 3), rx(0, 20, 3);
  const auto paths = trace_paths({}, tx, rx, cfg);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].kind, PathKind::kLos);
  EXPECT_EQ(paths[1].kind, PathKind::kGroundReflection);
  const double lambda = kSpeedOfLight / 28e9;
  EXPECT_NEAR(std::abs(paths[0].gain), lambda / (4 * kPi * 20.0), 1e-18);
  EXPECT_NEAR(paths[0].delay, 20.0 / kSpeedOfLight, 1e-20);
  const double d_ground = std::sqrt(20.0 * 20.0 + 6.0 * 6.0);
  EXPECT_NEAR(std::abs(paths[1].gain), 0.6 * lambda / (4 * kPi * d_ground), 1e-18);
  EXPECT_NEAR(paths[1].delay, d_ground / kSpeedOfLight, 1e-20);
  // Broadside along the street: a link along +Y is at angle 0.
  EXPECT_NEAR(paths[0].aod, 0.0, 1e-15);
  EXPECT_NEAR(paths[0].aoa, 0.0, 1e-15);
}

TEST(TracePaths, LosPhaseAndAngles) {
  const ChannelConfig cfg;
  const Vec3 tx(0, 0, 3), rx(7, 7, 3);
  const auto paths = trace_paths({}, tx, rx, cfg);
  ASSERT_FALSE(paths.empty());
  const double d = std::sqrt(98.0);
  const double lambda = cfg.wavelength();
  const double expected_phase = -2 * kPi * d / lambda;
  EXPECT_NEAR(std::remainder(std::arg(paths[0].gain) - expected_phase, 2 * kPi), 0.0, 1e-6);
  EXPECT_NEAR(paths[0].aod, kPi / 4, 1e-12);
  EXPECT_NEAR(paths[0].aoa, -kPi / 4, 1e-12);
}

TEST(TracePaths, WallBetweenRemovesLos) {
  ChannelConfig cfg;
  cfg.max_reflections = 0;
  Reflector wall;
  wall.box.center = Vec3(0, 10, 5);
  wall.box.length = 30;
  wall.box.width = 1;
  wall.box.height = 10;
  wall.box.azimuth = kPi / 2;
  wall.material = Material::kMetal;
  const std::vector<Reflector> scene{wall};
  EXPECT_TRUE(trace_paths(scene, Vec3(0, 0, 3), Vec3(0, 20, 3), cfg).empty());
  EXPECT_FALSE(los_status(scene, Vec3(0, 0, 3), Vec3(0, 20, 3)));
  EXPECT_TRUE(los_status({}, Vec3(0, 0, 3), Vec3(0, 20, 3)));
}

TEST(TracePaths, ImageMethodDelayOffParallelWall) {
  const ChannelConfig cfg;
  const Vec3 tx(0, 0, 3), rx(0, 20, 3);
  const std::vector<Reflector> scene{wall_along_y(5.0, -20.0, 40.0, 10.0)};
  const auto paths = trace_paths(scene, tx, rx, cfg);
  const PathParam* face = nullptr;
  for (const auto& p : paths) {
    if (p.kind == PathKind::kFaceReflection) face = &p;
  }
  ASSERT_NE(face, nullptr);
  const Vec3 image(10, 0, 3);
  EXPECT_NEAR(face->delay, (image - rx).norm() / kSpeedOfLight, 1e-20);
  const double lambda = cfg.wavelength();
  EXPECT_NEAR(std::abs(face->gain), 0.9 * lambda / (4 * kPi * (image - rx).norm()), 1e-18);
  // Departs toward +X, arrives from +X.
  EXPECT_GT(face->aod, 0.0);
  EXPECT_GT(face->aoa, 0.0);
}

TEST(TracePaths, SortedTruncatedAndReciprocal) {
  const ScenarioConfig sc = ScenarioConfig::defaults();
  ChannelConfig cfg;
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario scen = spawn_scenario(seed, sc);
    const auto snaps = sample_trajectory(scen);
    const Snapshot& s = snaps[snaps.size() / 2];
    const auto scene = scene_reflectors(scen, s);
    const Vec3 tx = sc.rsu_position;
    const auto paths = trace_paths(scene, tx, s.ms_antenna, cfg);
    EXPECT_LE(static_cast<int>(paths.size()), cfg.max_paths);
    for (std::size_t i = 1; i < paths.size(); ++i) {
      EXPECT_GE(std::abs(paths[i - 1].gain), std::abs(paths[i].gain));
    }
    bool has_los = false;
    for (const auto& p : paths) has_los |= p.kind == PathKind::kLos;
    ChannelConfig wide = cfg;
    wide.max_paths = 1000;
    const auto all = trace_paths(scene, tx, s.ms_antenna, wide);
    bool all_los = false;
    for (const auto& p : all) all_los |= p.kind == PathKind::kLos;
    EXPECT_EQ(los_status(scene, tx, s.ms_antenna), all_los);
    EXPECT_LE(has_los, all_los);

    const auto back = trace_paths(scene, s.ms_antenna, tx, wide);
    ASSERT_EQ(back.size(), all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_NEAR(std::abs(back[i].gain), std::abs(all[i].gain), 1e-15);
      EXPECT_NEAR(back[i].delay, all[i].delay, 1e-18);
      EXPECT_NEAR(back[i].aoa, all[i].aod, 1e-9);
      EXPECT_NEAR(back[i].aod, all[i].aoa, 1e-9);
    }
  }
}

TEST(TracePaths, RigidTranslationKeepsChannelNorm) {
  ChannelConfig cfg = small_config();
  const Vec3 tx(0, 0, 3), rx(4, 18, 1.6);
  std::vector<Reflector> scene{wall_along_y(6.0, -10.0, 30.0, 8.0)};
  const auto h0 = assemble_channel(trace_paths(scene, tx, rx, cfg), cfg);
  const Vec3 shift(13.25, -7.5, 0.0);  // horizontal; the ground stays put
  for (auto& r : scene) r.box.center += shift;
  const auto h1 = assemble_channel(trace_paths(scene, tx + shift, rx + shift, cfg), cfg);
  for (std::size_t k = 0; k < h0.size(); ++k) {
    EXPECT_NEAR(h0[k].norm(), h1[k].norm(), 1e-9 * h0[k].norm());
  }
}

TEST(AssembleChannel, SinglePathAndEmpty) {
  const ChannelConfig cfg = small_config();
  PathParam p;
  p.gain = 1.0;
  const auto h = assemble_channel(std::vector<PathParam>{p}, cfg);
  ASSERT_EQ(static_cast<int>(h.size()), cfg.num_subcarriers);
  const Eigen::MatrixXcd expected =
      steering_vector(0.0, cfg.num_ms_antennas) * steering_vector(0.0, cfg.num_bs_antennas).adjoint();
  for (const auto& hk : h) {
    EXPECT_LT((hk - expected).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(hk);
    EXPECT_LT(svd.singularValues()[1], 1e-12);
  }
  const auto zero = assemble_channel({}, cfg);
  EXPECT_EQ(max_abs(zero), 0.0);
}

TEST(AssembleChannel, HalfBandDelayAlternatesSign) {
  const ChannelConfig cfg = small_config();
  std::vector<PathParam> paths(2);
  paths[0].gain = 1.0;
  paths[1].gain = 1.0;
  paths[1].delay = cfg.sampling_interval() * cfg.num_subcarriers / 2;
  const auto h = assemble_channel(paths, cfg);
  // Path 2 carries e^{-j pi k'}: the sum is 2 A on even k' and 0 on odd k'.
  const Eigen::MatrixXcd a =
      steering_vector(0.0, cfg.num_ms_antennas) * steering_vector(0.0, cfg.num_bs_antennas).adjoint();
  for (int k = 0; k < cfg.num_subcarriers; ++k) {
    const int kb = k - cfg.num_subcarriers / 2;
    const double scale = (kb % 2 == 0) ? 2.0 : 0.0;
    EXPECT_LT((h[k] - scale * a).cwiseAbs().maxCoeff(), 1e-12) << "k " << k;
  }
  for (int k = 2; k < cfg.num_subcarriers; ++k) {
    EXPECT_LT((h[k] - h[k - 2]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(AssembleChannel, MatchesTapSumOnGrid) {
  const ChannelConfig cfg = small_config();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> tap(0, cfg.num_subcarriers - 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto paths = oracle::random_paths(rng, 4, 0.0);
    for (auto& p : paths) p.delay = tap(rng) * cfg.sampling_interval();
    const auto h = assemble_channel(paths, cfg);
    const auto oracle_h = oracle::tap_sum_channel(paths, cfg, 0, cfg.num_subcarriers - 1);
    EXPECT_LE(max_abs_diff(h, oracle_h), 1e-6 * max_abs(oracle_h));
  }
}

TEST(AssembleChannel, MatchesWideTapSumOffGrid) {
  // Off the sample grid the sinc taps never vanish, so the oracle needs a
  // wide window; the Nyquist subcarrier (k' = -K/2) is excluded because the
  // band-limited interpolation is ambiguous there.
  const ChannelConfig cfg = small_config();
  std::mt19937_64 rng(23);
  const double span = cfg.num_subcarriers * cfg.sampling_interval();
  for (int trial = 0; trial < 5; ++trial) {
    const auto paths = oracle::random_paths(rng, 3, span);
    const auto h = assemble_channel(paths, cfg);
    const auto oracle_h = oracle::tap_sum_channel(paths, cfg, -4000, 4000);
    double worst = 0.0;
    for (int k = 1; k < cfg.num_subcarriers; ++k) {
      worst = std::max(worst, (h[k] - oracle_h[k]).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, 1e-2 * max_abs(h));
  }
}

TEST(ChannelEnergy, EqualsFrobeniusSum) {
  const ChannelConfig cfg = small_config();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto paths = oracle::random_paths(rng, 5, 1e-7);
    const auto h = assemble_channel(paths, cfg);
    double direct = 0.0;
    for (const auto& hk : h) direct += hk.squaredNorm();
    EXPECT_NEAR(channel_energy(paths, cfg), direct, 1e-10 * direct);
  }
  EXPECT_EQ(channel_energy({}, cfg), 0.0);
}

TEST(CalibrateNoise, HitsTargetSnr) {
  ChannelConfig cfg;
  cfg.subcarrier_power = 2.0;
  const double energy = 3.7e-9;
  const long snaps = 123;
  const double sigma2 = calibrate_noise_power(energy, snaps, cfg);
  const double snr_db =
      10 * std::log10(cfg.subcarrier_power * energy / (cfg.num_subcarriers * sigma2 * snaps));
  EXPECT_NEAR(snr_db, 29.5, 1e-12);
  EXPECT_THROW(calibrate_noise_power(0.0, 1, cfg), std::invalid_argument);
}

TEST(ChannelDump, RoundTrip) {
  const ChannelConfig cfg = small_config();
  std::mt19937_64 rng(3);
  ChannelSnapshot ch;
  ch.paths = oracle::random_paths(rng, 3, 1e-7);
  ch.paths[1].kind = PathKind::kFaceReflection;
  ch.h = assemble_channel(ch.paths, cfg);
  ch.los_flag = true;
  std::stringstream buf;
  write_channel_dump(buf, 4, 9, ch);
  const std::size_t expected = 16 + 3 * 48 + cfg.num_subcarriers * 6 * 8 * 8;
  EXPECT_EQ(buf.str().size(), expected);
  const auto e = read_channel_dump(buf, cfg.num_subcarriers, 6, 8);
  EXPECT_EQ(e.q, 4);
  EXPECT_EQ(e.r, 9);
  EXPECT_TRUE(e.channel.los_flag);
  ASSERT_EQ(e.channel.paths.size(), 3u);
  EXPECT_EQ(e.channel.paths[1].kind, PathKind::kFaceReflection);
  EXPECT_EQ(e.channel.paths[2].gain, ch.paths[2].gain);
  EXPECT_LE(max_abs_diff(e.channel.h, ch.h), 1e-6 * max_abs(ch.h));
}

TEST(ChannelConfig, Validation) {
  ChannelConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_reflections = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = ChannelConfig();
  cfg.metal_reflection = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace beamlab
