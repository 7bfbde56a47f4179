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
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "beamlab/optimizer.hpp"
#include "beamlab/vdban.hpp"

namespace beamlab {

struct TrainConfig {
  int epochs = 60;
  int batch_size = 64;
  AdamConfig adam;

  void validate() const;
};

/// Inputs and labels, one sample per row.
struct LabeledSet {
  Eigen::MatrixXd vdf;  // N x (G * 4)
  Eigen::MatrixXd loc;  // N x 2
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_metric = 0.0;
};

struct TrainResult {
  VdbanModel model;  // weights of the best epoch
  std::vector<EpochStats> trace;
  int best_epoch = 0;
};

/// Minibatch training with Adam. After each epoch `validate` scores the
/// model; the weights of the highest-scoring epoch are returned (earliest
/// on ties). Batch order is shuffled per epoch from `seed`. Throws
/// std::runtime_error if the loss becomes non-finite.
TrainResult train_vdban(VdbanModel model, const LabeledSet& train, const TrainConfig& cfg,
                        std::uint64_t seed,
                        const std::function<double(const VdbanModel&)>& validate,
                        const std::function<void(const EpochStats&)>& on_epoch = {});

/// Rows `rows` of a set, in that order.
LabeledSet select_rows(const LabeledSet& set, const std::vector<int>& rows);

}  // namespace beamlab
