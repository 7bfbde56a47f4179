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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beamlab/baselines.hpp"
#include "beamlab/channel.hpp"
#include "beamlab/detection.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/training.hpp"
#include "beamlab/vdban.hpp"

namespace beamlab {

/// Bad user input: config values, incompatible files, unknown options.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FeatureConfig {
  int sequence_length = 3;  // S
  DetectionNoise detection_noise;
  double cell_length = 11.7;  // L_G
  double cell_width = 2.0;    // W_G
  /// Block size of the average pooling applied to stored scene images.
  int sif_pool_block = 40;
  /// Keep full-resolution scene images in the dataset (large).
  bool store_sif = false;
};

struct CodebookConfig {
  int tx_size = 64;  // N_B^CB
  int rx_size = 64;  // N_U^CB
};

struct EvalConfig {
  std::vector<int> top_b = {1, 2, 3, 5, 10};
  std::vector<double> sigma_c = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> m_f = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> tb_over_td = {1.0 / 3.0, 0.5};
  int knn_k = 5;
  int robustness_b = 5;
};

struct RunConfig {
  std::uint64_t master_seed = 1;
  int num_scenarios = 600;
  ScenarioConfig scenario = ScenarioConfig::defaults();
  ChannelConfig channel;
  FeatureConfig features;
  CodebookConfig codebook;
  std::array<double, 3> split = {0.8, 0.1, 0.1};
  /// Architecture; grid_cells and num_classes are bound to the dataset.
  VdbanConfig vdban;
  TrainConfig train;
  BctConfig bct;
  bool bct_resample = true;
  EvalConfig eval;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Parses a JSON run config. Missing keys keep their defaults; unknown
/// keys and ill-typed values are rejected with the field path. Angles are
/// given in degrees (keys ending in _deg).
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON (sorted keys); `indent` < 0 gives one line.
std::string run_config_to_json(const RunConfig& cfg, int indent = 2);

/// FNV-1a of the one-line canonical JSON.
std::uint64_t config_hash(const RunConfig& cfg);

std::string hex64(std::uint64_t v);

}  // namespace beamlab
