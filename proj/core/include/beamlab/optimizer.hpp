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

#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace beamlab {

/// A trainable tensor and its gradient. Vectors are stored as 1 x n.
struct Parameter {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;
};

using ParameterList = std::vector<Parameter>;

void zero_grads(ParameterList& params);

/// Uniform draw in [0, 1) from the top 53 bits of one generator output.
double unit_uniform(std::mt19937_64& rng);

/// Fills m uniformly in +-sqrt(6 / (fan_in + fan_out)).
void glorot_init(Eigen::MatrixXd& m, int fan_in, int fan_out, std::mt19937_64& rng);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment gradient descent with bias correction.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}
  void step(ParameterList& params);
  long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

/// Mean softmax cross-entropy of logit rows against labels; writes
/// d(loss)/d(logits) into `grad` when it is not null.
double softmax_cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                             Eigen::MatrixXd* grad);

/// Row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Class indices sorted by descending score; equal scores keep index order.
std::vector<int> rank_scores(const Eigen::RowVectorXd& scores);

}  // namespace beamlab
