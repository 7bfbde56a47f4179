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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace beamlab {
namespace {

TEST(LocationKnn, MajorityVote) {
  const LocationKnn knn({Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(10, 0)}, {2, 2, 1, 0}, 4, 3);
  EXPECT_EQ(knn.rank(Vec2(0.1, 0)), (std::vector<int>{2, 1, 0, 3}));
  EXPECT_EQ(knn.rank(Vec2(9, 0)), (std::vector<int>{0, 1, 2, 3}));
}

TEST(LocationKnn, TiesBrokenByNearestThenLabel) {
  // k = 2 with one vote each: the closer label wins.
  const LocationKnn knn({Vec2(0, 0), Vec2(3, 0)}, {1, 0}, 3, 2);
  EXPECT_EQ(knn.rank(Vec2(1, 0)), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(knn.rank(Vec2(2.5, 0)), (std::vector<int>{0, 1, 2}));
  // Equidistant: label order decides.
  EXPECT_EQ(knn.rank(Vec2(1.5, 0)), (std::vector<int>{0, 1, 2}));
}

TEST(LocationKnn, KLargerThanTrainingSet) {
  const LocationKnn knn({Vec2(0, 0), Vec2(1, 1)}, {0, 0}, 2, 10);
  EXPECT_EQ(knn.rank(Vec2(5, 5)), (std::vector<int>{0, 1}));
}

TEST(LocationKnn, Memorizes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::vector<Vec2> pts;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    pts.emplace_back(u(rng), u(rng));
    labels.push_back(i % 7);
  }
  const LocationKnn knn(pts, labels, 7, 1);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(knn.rank(pts[i]).front(), labels[i]);
}

TEST(LocationKnn, Rejections) {
  EXPECT_THROW(LocationKnn({}, {}, 2, 1), std::invalid_argument);
  EXPECT_THROW(LocationKnn({Vec2(0, 0)}, {0, 1}, 2, 1), std::invalid_argument);
  EXPECT_THROW(LocationKnn({Vec2(0, 0)}, {0}, 2, 0), std::invalid_argument);
  EXPECT_THROW(LocationKnn({Vec2(0, 0)}, {2}, 2, 1), std::out_of_range);
}

Eigen::MatrixXd random_inputs(int n, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 255.0);
  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = u(rng);
  return x;
}

TEST(BctClassifier, ZeroWeightsGiveUniform) {
  std::mt19937_64 rng(2);
  const BctClassifier c = BctClassifier::zeros(12, BctConfig{});
  const Eigen::MatrixXd p = c.probabilities(random_inputs(5, 12, rng));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(p(i, j), 1.0 / 3.0);
  // Ties resolve to the first group.
  for (int g : c.predict_groups(random_inputs(4, 12, rng))) EXPECT_EQ(g, 1);
}

TEST(BctClassifier, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(3);
  const BctClassifier c(10, BctConfig{}, 4);
  const Eigen::MatrixXd p = c.probabilities(random_inputs(50, 10, rng));
  for (int i = 0; i < 50; ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    EXPECT_GT(p.row(i).minCoeff(), 0.0);
  }
  for (int g : c.predict_groups(random_inputs(50, 10, rng))) {
    EXPECT_GE(g, 1);
    EXPECT_LE(g, 3);
  }
}

TEST(BctClassifier, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  BctConfig cfg;
  cfg.hidden = 5;
  BctClassifier c(6, cfg, 6);
  std::normal_distribution<double> d(0.0, 0.3);
  for (auto& p : c.params())
    for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = d(rng);
  const Eigen::MatrixXd x = random_inputs(4, 6, rng);
  const std::vector<int> y{0, 2, 1, 2};
  c.loss_and_grad(x, y);
  std::vector<Eigen::MatrixXd> grads;
  for (const auto& p : c.params()) grads.push_back(p.grad);
  const double h = 1e-6;
  for (std::size_t k = 0; k < c.params().size(); ++k) {
    auto& v = c.params()[k].value;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double keep = v.data()[i];
      v.data()[i] = keep + h;
      const double lp = c.loss_and_grad(x, y);
      v.data()[i] = keep - h;
      const double lm = c.loss_and_grad(x, y);
      v.data()[i] = keep;
      EXPECT_NEAR(grads[k].data()[i], (lp - lm) / (2.0 * h), 1e-6) << c.params()[k].name;
    }
  }
}

TEST(BctClassifier, FitsSmallProblemDeterministically) {
  std::mt19937_64 rng(7);
  const int n = 60;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, 3);
  std::vector<int> y(n);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 3;
    x(i, y[i]) = 180.0 + u(rng);
    x(i, (y[i] + 1) % 3) = u(rng);
  }
  BctConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 16;
  cfg.adam.learning_rate = 1e-2;
  BctClassifier a(3, cfg, 8), b(3, cfg, 8);
  const std::vector<double> la = a.fit(x, y, 9);
  const std::vector<double> lb = b.fit(x, y, 9);
  EXPECT_EQ(la, lb);
  ASSERT_EQ(la.size(), 200u);
  EXPECT_LT(la.back(), la.front());
  const std::vector<int> pred = a.predict_groups(x);
  for (int i = 0; i < n; ++i) EXPECT_EQ(pred[i], y[i] + 1);
}

TEST(BctClassifier, Rejections) {
  EXPECT_THROW(BctClassifier::zeros(0, BctConfig{}), std::invalid_argument);
  BctConfig bad;
  bad.hidden = 0;
  EXPECT_THROW(BctClassifier(3, bad, 1), std::invalid_argument);
  const BctClassifier c(3, BctConfig{}, 1);
  EXPECT_THROW(c.logits(Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
}

}  // namespace
}  // namespace beamlab
