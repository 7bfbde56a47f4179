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

#include "beamlab/attention.hpp"

#include <cmath>
#include <stdexcept>

namespace beamlab {

AttentionOutput attention_forward(const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f,
                                  const HeadWeights& w) {
  if (u.size() != w.wq.rows() || f.size() != w.wq.rows() || w.wk.rows() != w.wq.rows() ||
      w.wv.rows() != w.wq.rows() || w.wk.cols() != w.wq.cols()) {
    throw std::invalid_argument("attention_forward: shape mismatch");
  }
  Eigen::MatrixXd x(2, u.size());
  x.row(0) = u;
  x.row(1) = f;
  const Eigen::MatrixXd q = x * w.wq;
  const Eigen::MatrixXd k = x * w.wk;
  const Eigen::MatrixXd v = x * w.wv;
  Eigen::Matrix2d s = q * k.transpose() / std::sqrt(static_cast<double>(w.wq.cols()));
  for (int i = 0; i < 2; ++i) {
    const double m = s.row(i).maxCoeff();
    s.row(i) = (s.row(i).array() - m).exp();
    s.row(i) /= s.row(i).sum();
  }
  const Eigen::MatrixXd o = s * v;
  return {o.row(0), o.row(1), s};
}

std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> multihead_attention(
    const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f, const EncoderBlockWeights& block) {
  if (block.heads.empty()) throw std::invalid_argument("multihead_attention: no heads");
  const Eigen::Index d = block.heads[0].wv.cols();
  const auto h = static_cast<Eigen::Index>(block.heads.size());
  if (block.wo.rows() != d * h) throw std::invalid_argument("multihead_attention: W_O shape");
  Eigen::RowVectorXd cu(d * h), cf(d * h);
  for (Eigen::Index i = 0; i < h; ++i) {
    const AttentionOutput a = attention_forward(u, f, block.heads[i]);
    cu.segment(i * d, d) = a.u;
    cf.segment(i * d, d) = a.f;
  }
  return {cu * block.wo, cf * block.wo};
}

std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> multihead_forward(
    const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f, const EncoderBlockWeights& block) {
  const auto [mu, mf] = multihead_attention(u, f, block);
  const Eigen::RowVectorXd ru = u + mu;
  const Eigen::RowVectorXd rf = f + mf;
  const auto ffn = [&](const Eigen::RowVectorXd& x) -> Eigen::RowVectorXd {
    const Eigen::RowVectorXd hidden = (x * block.ffn1_w + block.ffn1_b).cwiseMax(0.0);
    return x + hidden * block.ffn2_w + block.ffn2_b;
  };
  return {ffn(ru), ffn(rf)};
}

}  // namespace beamlab
