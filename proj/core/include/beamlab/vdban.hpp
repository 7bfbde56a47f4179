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
#include <vector>

#include <Eigen/Core>

#include "beamlab/attention.hpp"
#include "beamlab/optimizer.hpp"

namespace beamlab {

struct VdbanConfig {
  int grid_cells = 0;   // G
  int num_classes = 0;  // |W'_P|
  int model_dim = 64;   // D
  int conv_filters = 1;
  std::vector<int> block_dims = {16, 32};  // d of each encoder block
  int heads = 4;
  int ffn_hidden = 128;
  std::vector<int> head_hidden = {1024, 1024};
  /// Input scaling: the VDF azimuth column is multiplied by azimuth_scale
  /// and the MS location by location_scale.
  double azimuth_scale = 0.31830988618379067;  // 1 / pi
  double location_scale = 0.05;

  void validate() const;
  bool operator==(const VdbanConfig&) const = default;
};

/// Beam classifier fusing the VDF and the MS location.
///
///   f = ReLU(FC(conv1x1(VDF)))   u = ReLU(FC(location))
///   (u, f) -> encoder block 1 -> encoder block 2
///   logits = MLP(u + f)
///
/// Inputs are batched one sample per row: VDF rows hold the G x 4 matrix
/// flattened row-major, location rows hold (x, y).
class VdbanModel {
 public:
  VdbanModel() = default;
  VdbanModel(const VdbanConfig& cfg, std::uint64_t seed);

  const VdbanConfig& config() const { return cfg_; }
  ParameterList& params() { return params_; }
  const ParameterList& params() const { return params_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& vdf, const Eigen::MatrixXd& loc) const;

  /// Mean cross-entropy of the batch; overwrites every parameter gradient.
  /// The logits of the forward pass are copied to `logits` if given.
  double loss_and_grad(const Eigen::MatrixXd& vdf, const Eigen::MatrixXd& loc,
                       const std::vector<int>& labels, Eigen::MatrixXd* logits = nullptr);

  /// Unbatched reference path built from the attention primitives.
  Eigen::RowVectorXd forward_single(const Eigen::MatrixXd& vdf_g4, const Eigen::Vector2d& loc) const;

  EncoderBlockWeights block_weights(int block) const;

 private:
  struct HeadIndex {
    int wq, wk, wv;
  };
  struct BlockIndex {
    std::vector<HeadIndex> heads;
    int wo, f1w, f1b, f2w, f2b;
  };
  struct Cache;

  int add(const std::string& name, int rows, int cols);
  const Eigen::MatrixXd& w(int i) const { return params_[i].value; }
  Eigen::MatrixXd& g(int i) { return params_[i].grad; }
  void check_inputs(const Eigen::MatrixXd& vdf, const Eigen::MatrixXd& loc) const;
  Eigen::MatrixXd run(const Eigen::MatrixXd& vdf, const Eigen::MatrixXd& loc, Cache* cache) const;

  VdbanConfig cfg_;
  ParameterList params_;
  int conv_w_ = 0, conv_b_ = 0, vdf_w_ = 0, vdf_b_ = 0, loc_w_ = 0, loc_b_ = 0;
  std::vector<BlockIndex> blocks_;
  std::vector<int> mlp_w_, mlp_b_;  // hidden layers then the output layer
};

}  // namespace beamlab
