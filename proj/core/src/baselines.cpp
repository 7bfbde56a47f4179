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

#include "beamlab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "beamlab/seeds.hpp"

namespace beamlab {

LocationKnn::LocationKnn(std::vector<Vec2> locations, std::vector<int> labels, int num_labels,
                         int k)
    : locations_(std::move(locations)), labels_(std::move(labels)), num_labels_(num_labels),
      k_(k) {
  if (locations_.empty()) throw std::invalid_argument("LocationKnn: empty training set");
  if (locations_.size() != labels_.size()) {
    throw std::invalid_argument("LocationKnn: locations and labels differ in length");
  }
  if (k_ < 1) throw std::invalid_argument("LocationKnn: k must be >= 1");
  for (int l : labels_) {
    if (l < 0 || l >= num_labels_) throw std::out_of_range("LocationKnn: label out of range");
  }
}

std::vector<int> LocationKnn::rank(const Vec2& query) const {
  const int n = static_cast<int>(locations_.size());
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) dist[i] = (locations_[i] - query).squaredNorm();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int k = std::min(k_, n);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
  });
  std::vector<int> votes(num_labels_, 0);
  for (int i = 0; i < k; ++i) ++votes[labels_[order[i]]];
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> nearest(num_labels_, kInf);
  for (int i = 0; i < n; ++i) nearest[labels_[i]] = std::min(nearest[labels_[i]], dist[i]);
  std::vector<int> ranked(num_labels_);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
    if (votes[a] != votes[b]) return votes[a] > votes[b];
    return nearest[a] < nearest[b];
  });
  return ranked;
}

void BctConfig::validate() const {
  if (hidden < 1) throw std::invalid_argument("bct.hidden: must be >= 1");
  if (epochs < 1) throw std::invalid_argument("bct.epochs: must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("bct.batch_size: must be >= 1");
  if (!(adam.learning_rate >= 0.0)) throw std::invalid_argument("bct.learning_rate: negative");
}

BctClassifier BctClassifier::zeros(int input_dim, const BctConfig& cfg) {
  if (input_dim < 1) throw std::invalid_argument("BctClassifier: input_dim must be >= 1");
  cfg.validate();
  BctClassifier c;
  c.input_dim_ = input_dim;
  c.cfg_ = cfg;
  const auto add = [&](const char* name, int r, int k) {
    c.params_.push_back({name, Eigen::MatrixXd::Zero(r, k), Eigen::MatrixXd::Zero(r, k)});
  };
  add("w1", input_dim, cfg.hidden);
  add("b1", 1, cfg.hidden);
  add("w2", cfg.hidden, kGroups);
  add("b2", 1, kGroups);
  return c;
}

BctClassifier::BctClassifier(int input_dim, const BctConfig& cfg, std::uint64_t seed)
    : BctClassifier(zeros(input_dim, cfg)) {
  std::mt19937_64 rng(seed);
  glorot_init(params_[0].value, input_dim, cfg.hidden, rng);
  glorot_init(params_[2].value, cfg.hidden, kGroups, rng);
}

Eigen::MatrixXd BctClassifier::logits(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) throw std::invalid_argument("BctClassifier: input width");
  const Eigen::MatrixXd h =
      ((x * cfg_.input_scale) * params_[0].value).rowwise() + params_[1].value.row(0);
  return (h.array().tanh().matrix() * params_[2].value).rowwise() + params_[3].value.row(0);
}

Eigen::MatrixXd BctClassifier::probabilities(const Eigen::MatrixXd& x) const {
  return softmax_rows(logits(x));
}

std::vector<int> BctClassifier::predict_groups(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd z = logits(x);
  std::vector<int> out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index arg;
    z.row(i).maxCoeff(&arg);
    out[i] = static_cast<int>(arg) + 1;
  }
  return out;
}

double BctClassifier::loss_and_grad(const Eigen::MatrixXd& x, const std::vector<int>& classes) {
  if (x.cols() != input_dim_) throw std::invalid_argument("BctClassifier: input width");
  const Eigen::MatrixXd xs = x * cfg_.input_scale;
  const Eigen::MatrixXd h =
      ((xs * params_[0].value).rowwise() + params_[1].value.row(0)).array().tanh().matrix();
  const Eigen::MatrixXd z = (h * params_[2].value).rowwise() + params_[3].value.row(0);
  Eigen::MatrixXd dz;
  const double loss = softmax_cross_entropy(z, classes, &dz);
  params_[2].grad = h.transpose() * dz;
  params_[3].grad = dz.colwise().sum();
  const Eigen::MatrixXd dh =
      ((dz * params_[2].value.transpose()).array() * (1.0 - h.array().square())).matrix();
  params_[0].grad = xs.transpose() * dh;
  params_[1].grad = dh.colwise().sum();
  return loss;
}

std::vector<double> BctClassifier::fit(const Eigen::MatrixXd& x, const std::vector<int>& classes,
                                       std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  if (n == 0 || static_cast<int>(classes.size()) != n) {
    throw std::invalid_argument("BctClassifier::fit: empty or mismatched training set");
  }
  Adam adam(cfg_.adam);
  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> trace;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[uniform_index(rng, static_cast<std::uint64_t>(i) + 1)]);
    }
    double total = 0.0;
    for (int start = 0; start < n; start += cfg_.batch_size) {
      const int end = std::min(n, start + cfg_.batch_size);
      Eigen::MatrixXd xb(end - start, x.cols());
      std::vector<int> yb;
      for (int i = start; i < end; ++i) {
        xb.row(i - start) = x.row(order[i]);
        yb.push_back(classes[order[i]]);
      }
      const double loss = loss_and_grad(xb, yb);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("BCT classifier training diverged at epoch " +
                                 std::to_string(epoch + 1));
      }
      total += loss * (end - start);
      adam.step(params_);
    }
    trace.push_back(total / n);
  }
  return trace;
}

}  // namespace beamlab
