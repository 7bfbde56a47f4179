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

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace beamlab {

/// Projections of one attention head: D x d each.
struct HeadWeights {
  Eigen::MatrixXd wq;
  Eigen::MatrixXd wk;
  Eigen::MatrixXd wv;
};

/// Encoder block: h heads, output map W_O ((d h) x D), and a feed-forward
/// network D -> D_ff -> D shared by both tokens.
struct EncoderBlockWeights {
  std::vector<HeadWeights> heads;
  Eigen::MatrixXd wo;
  Eigen::MatrixXd ffn1_w;
  Eigen::RowVectorXd ffn1_b;
  Eigen::MatrixXd ffn2_w;
  Eigen::RowVectorXd ffn2_b;
};

struct AttentionOutput {
  Eigen::RowVectorXd u;
  Eigen::RowVectorXd f;
  Eigen::Matrix2d weights;  // row-stochastic attention map
};

/// Single-head self-attention over the two tokens [u; f]:
/// Softmax(Q K^T / sqrt(d)) V with Q = X W_Q, K = X W_K, V = X W_V.
AttentionOutput attention_forward(const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f,
                                  const HeadWeights& w);

/// Concatenated head outputs mapped through W_O.
std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> multihead_attention(
    const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f, const EncoderBlockWeights& block);

/// Full encoder block: residual multi-head attention followed by the
/// residual feed-forward network (ReLU hidden layer).
std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> multihead_forward(
    const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& f, const EncoderBlockWeights& block);

}  // namespace beamlab
