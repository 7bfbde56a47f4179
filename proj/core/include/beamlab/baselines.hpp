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

#include "beamlab/geometry.hpp"
#include "beamlab/optimizer.hpp"

namespace beamlab {

/// Location-only beam predictor: k nearest training locations vote.
class LocationKnn {
 public:
  LocationKnn(std::vector<Vec2> locations, std::vector<int> labels, int num_labels, int k);

  /// Every label in [0, num_labels), ordered by votes among the k nearest
  /// neighbors (descending), then by the distance to the nearest training
  /// sample carrying the label, then by label. Labels absent from the
  /// training set come last in index order.
  std::vector<int> rank(const Vec2& query) const;

  int k() const { return k_; }

 private:
  std::vector<Vec2> locations_;
  std::vector<int> labels_;
  int num_labels_ = 0;
  int k_ = 1;
};

struct BctConfig {
  int hidden = 32;
  int epochs = 100;
  int batch_size = 64;
  AdamConfig adam;
  /// Multiplies the raw pooled-image input (pixel scale 0..255).
  double input_scale = 1.0 / 255.0;

  void validate() const;
};

/// Three-way BCT group classifier: softmax(W2 tanh(W1 x + b1) + b2).
class BctClassifier {
 public:
  static constexpr int kGroups = 3;

  BctClassifier() = default;
  /// Glorot-initialized weights.
  BctClassifier(int input_dim, const BctConfig& cfg, std::uint64_t seed);
  /// All weights zero, so every input maps to the uniform distribution.
  static BctClassifier zeros(int input_dim, const BctConfig& cfg);

  int input_dim() const { return input_dim_; }
  const BctConfig& config() const { return cfg_; }
  ParameterList& params() { return params_; }
  const ParameterList& params() const { return params_; }

  Eigen::MatrixXd logits(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd probabilities(const Eigen::MatrixXd& x) const;
  /// Predicted group in {1, 2, 3} per row.
  std::vector<int> predict_groups(const Eigen::MatrixXd& x) const;

  /// Classes are 0-based (group - 1).
  double loss_and_grad(const Eigen::MatrixXd& x, const std::vector<int>& classes);

  /// Minibatch Adam over the rows of x with 0-based classes; returns the
  /// mean loss of each epoch.
  std::vector<double> fit(const Eigen::MatrixXd& x, const std::vector<int>& classes,
                          std::uint64_t seed);

 private:
  int input_dim_ = 0;
  BctConfig cfg_;
  ParameterList params_;  // w1, b1, w2, b2
};

}  // namespace beamlab
