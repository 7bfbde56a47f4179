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
#include <random>

#include <gtest/gtest.h>

namespace beamlab {
namespace {

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.5);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

HeadWeights random_head(int dim, int d, std::mt19937_64& rng) {
  return {random_matrix(dim, d, rng), random_matrix(dim, d, rng), random_matrix(dim, d, rng)};
}

// Scalar loops over the two tokens.
void scalar_attention(const std::vector<std::vector<double>>& x, const HeadWeights& w,
                      std::vector<std::vector<double>>& out, double attn[2][2]) {
  const int dim = static_cast<int>(w.wq.rows());
  const int d = static_cast<int>(w.wq.cols());
  double q[2][64] = {}, k[2][64] = {}, v[2][64] = {};
  for (int t = 0; t < 2; ++t)
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < dim; ++i) {
        q[t][j] += x[t][i] * w.wq(i, j);
        k[t][j] += x[t][i] * w.wk(i, j);
        v[t][j] += x[t][i] * w.wv(i, j);
      }
  out.assign(2, std::vector<double>(d, 0.0));
  for (int a = 0; a < 2; ++a) {
    double s[2];
    for (int b = 0; b < 2; ++b) {
      s[b] = 0.0;
      for (int j = 0; j < d; ++j) s[b] += q[a][j] * k[b][j];
      s[b] /= std::sqrt(static_cast<double>(d));
    }
    const double e0 = std::exp(s[0]), e1 = std::exp(s[1]);
    attn[a][0] = e0 / (e0 + e1);
    attn[a][1] = e1 / (e0 + e1);
    for (int j = 0; j < d; ++j) out[a][j] = attn[a][0] * v[0][j] + attn[a][1] * v[1][j];
  }
}

TEST(Attention, MatchesScalarOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 3 + trial % 6;
    const int d = 2 + trial % 5;
    const HeadWeights w = random_head(dim, d, rng);
    const Eigen::RowVectorXd u = random_matrix(1, dim, rng);
    const Eigen::RowVectorXd f = random_matrix(1, dim, rng);
    const AttentionOutput got = attention_forward(u, f, w);
    std::vector<std::vector<double>> x(2, std::vector<double>(dim));
    for (int i = 0; i < dim; ++i) {
      x[0][i] = u(i);
      x[1][i] = f(i);
    }
    std::vector<std::vector<double>> out;
    double attn[2][2];
    scalar_attention(x, w, out, attn);
    for (int j = 0; j < d; ++j) {
      EXPECT_NEAR(got.u(j), out[0][j], 1e-12);
      EXPECT_NEAR(got.f(j), out[1][j], 1e-12);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_NEAR(got.weights(a, b), attn[a][b], 1e-12);
  }
}

TEST(Attention, RowStochastic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const HeadWeights w = random_head(6, 4, rng);
    const AttentionOutput a =
        attention_forward(random_matrix(1, 6, rng) * 5.0, random_matrix(1, 6, rng) * 5.0, w);
    for (int r = 0; r < 2; ++r) {
      EXPECT_NEAR(a.weights.row(r).sum(), 1.0, 1e-12);
      EXPECT_GE(a.weights.row(r).minCoeff(), 0.0);
    }
  }
}

TEST(Attention, ZeroQueryGivesUniformWeights) {
  std::mt19937_64 rng(6);
  HeadWeights w = random_head(5, 3, rng);
  w.wq.setZero();
  const Eigen::RowVectorXd u = random_matrix(1, 5, rng);
  const Eigen::RowVectorXd f = random_matrix(1, 5, rng);
  const AttentionOutput a = attention_forward(u, f, w);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_DOUBLE_EQ(a.weights(r, c), 0.5);
  const Eigen::RowVectorXd mean_v = 0.5 * (u * w.wv + f * w.wv);
  EXPECT_LT((a.u - mean_v).norm(), 1e-12);
  EXPECT_LT((a.f - mean_v).norm(), 1e-12);
}

TEST(Attention, IdenticalTokensGiveIdenticalOutputs) {
  std::mt19937_64 rng(7);
  const HeadWeights w = random_head(4, 4, rng);
  const Eigen::RowVectorXd x = random_matrix(1, 4, rng);
  const AttentionOutput a = attention_forward(x, x, w);
  EXPECT_LT((a.u - a.f).norm(), 1e-15);
  EXPECT_LT((a.u - x * w.wv).norm(), 1e-12);
}

TEST(Attention, ShapeMismatchThrows) {
  std::mt19937_64 rng(8);
  const HeadWeights w = random_head(4, 2, rng);
  EXPECT_THROW(attention_forward(Eigen::RowVectorXd::Zero(3), Eigen::RowVectorXd::Zero(4), w),
               std::invalid_argument);
}

TEST(MultiheadForward, MatchesManualComposition) {
  std::mt19937_64 rng(9);
  const int dim = 6, d = 3, h = 2, hidden = 5;
  EncoderBlockWeights block;
  for (int i = 0; i < h; ++i) block.heads.push_back(random_head(dim, d, rng));
  block.wo = random_matrix(d * h, dim, rng);
  block.ffn1_w = random_matrix(dim, hidden, rng);
  block.ffn1_b = random_matrix(1, hidden, rng);
  block.ffn2_w = random_matrix(hidden, dim, rng);
  block.ffn2_b = random_matrix(1, dim, rng);
  const Eigen::RowVectorXd u = random_matrix(1, dim, rng);
  const Eigen::RowVectorXd f = random_matrix(1, dim, rng);

  Eigen::RowVectorXd cu(d * h), cf(d * h);
  for (int i = 0; i < h; ++i) {
    const AttentionOutput a = attention_forward(u, f, block.heads[i]);
    cu.segment(i * d, d) = a.u;
    cf.segment(i * d, d) = a.f;
  }
  const auto ffn = [&](const Eigen::RowVectorXd& x) {
    Eigen::RowVectorXd hdn = x * block.ffn1_w + block.ffn1_b;
    for (int j = 0; j < hidden; ++j) hdn(j) = std::max(0.0, hdn(j));
    return Eigen::RowVectorXd(x + hdn * block.ffn2_w + block.ffn2_b);
  };
  const Eigen::RowVectorXd eu = ffn(u + cu * block.wo);
  const Eigen::RowVectorXd ef = ffn(f + cf * block.wo);
  const auto [gu, gf] = multihead_forward(u, f, block);
  EXPECT_LT((gu - eu).norm(), 1e-12);
  EXPECT_LT((gf - ef).norm(), 1e-12);

  EncoderBlockWeights empty = block;
  empty.heads.clear();
  EXPECT_THROW(multihead_attention(u, f, empty), std::invalid_argument);
}

}  // namespace
}  // namespace beamlab
