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

#include "beamlab/training.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "beamlab/seeds.hpp"

namespace beamlab {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train.epochs: must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train.batch_size: must be >= 1");
  if (!(adam.learning_rate >= 0.0)) throw std::invalid_argument("train.learning_rate: negative");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw std::invalid_argument("train.beta1/beta2: must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw std::invalid_argument("train.epsilon: must be positive");
}

LabeledSet select_rows(const LabeledSet& set, const std::vector<int>& rows) {
  LabeledSet out;
  out.vdf.resize(static_cast<Eigen::Index>(rows.size()), set.vdf.cols());
  out.loc.resize(static_cast<Eigen::Index>(rows.size()), set.loc.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.vdf.row(static_cast<Eigen::Index>(i)) = set.vdf.row(rows[i]);
    out.loc.row(static_cast<Eigen::Index>(i)) = set.loc.row(rows[i]);
    out.labels.push_back(set.labels[rows[i]]);
  }
  return out;
}

TrainResult train_vdban(VdbanModel model, const LabeledSet& train, const TrainConfig& cfg,
                        std::uint64_t seed,
                        const std::function<double(const VdbanModel&)>& validate,
                        const std::function<void(const EpochStats&)>& on_epoch) {
  cfg.validate();
  if (train.size() == 0) throw std::invalid_argument("train_vdban: empty training set");
  if (!validate) throw std::invalid_argument("train_vdban: no validation metric");
  Adam adam(cfg.adam);
  std::mt19937_64 rng(seed);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (int i = train.size() - 1; i > 0; --i) {
      std::swap(order[i], order[uniform_index(rng, static_cast<std::uint64_t>(i) + 1)]);
    }
    double loss_sum = 0.0;
    long correct = 0;
    for (int start = 0; start < train.size(); start += cfg.batch_size) {
      const int end = std::min(train.size(), start + cfg.batch_size);
      const LabeledSet batch =
          select_rows(train, std::vector<int>(order.begin() + start, order.begin() + end));
      Eigen::MatrixXd logits;
      const double loss = model.loss_and_grad(batch.vdf, batch.loc, batch.labels, &logits);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "training diverged: non-finite loss at epoch " << epoch << ", batch starting at "
            << start << " (learning rate " << cfg.adam.learning_rate << ")";
        throw std::runtime_error(msg.str());
      }
      loss_sum += loss * (end - start);
      for (int r = 0; r < end - start; ++r) {
        Eigen::Index arg;
        logits.row(r).maxCoeff(&arg);
        if (arg == batch.labels[r]) ++correct;
      }
      adam.step(model.params());
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / train.size();
    stats.train_accuracy = static_cast<double>(correct) / train.size();
    stats.validation_metric = validate(model);
    result.trace.push_back(stats);
    if (on_epoch) on_epoch(stats);
    if (stats.validation_metric > best) {
      best = stats.validation_metric;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  if (result.best_epoch == 0) {
    // Every validation score was NaN; fall back to the final weights.
    result.best_epoch = cfg.epochs;
    result.model = model;
  }
  return result;
}

}  // namespace beamlab
