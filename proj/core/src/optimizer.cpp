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

#include "beamlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace beamlab {

void zero_grads(ParameterList& params) {
  for (auto& p : params) p.grad.setZero(p.value.rows(), p.value.cols());
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void glorot_init(Eigen::MatrixXd& m, int fan_in, int fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = (2.0 * unit_uniform(rng) - 1.0) * limit;
  }
}

void Adam::step(ParameterList& params) {
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
    }
  }
  if (m_.size() != params.size()) throw std::logic_error("Adam: parameter list changed");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * p.grad;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * p.grad.cwiseAbs2();
    p.value.array() -= cfg_.learning_rate * (m_[i].array() / c1) /
                       ((v_[i].array() / c2).sqrt() + cfg_.epsilon);
  }
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

double softmax_cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                             Eigen::MatrixXd* grad) {
  const Eigen::Index n = logits.rows();
  if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("softmax_cross_entropy: batch and labels differ");
  }
  double loss = 0.0;
  if (grad) grad->resize(n, logits.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= logits.cols()) throw std::out_of_range("softmax_cross_entropy: label");
    const double m = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - m).exp();
    const double z = e.sum();
    loss += std::log(z) - (logits(i, y) - m);
    if (grad) {
      grad->row(i) = e / (z * static_cast<double>(n));
      (*grad)(i, y) -= 1.0 / static_cast<double>(n);
    }
  }
  return loss / static_cast<double>(n);
}

std::vector<int> rank_scores(const Eigen::RowVectorXd& scores) {
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace beamlab
