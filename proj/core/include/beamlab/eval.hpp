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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "beamlab/dataset.hpp"

namespace beamlab {

enum class Subset { kAll, kLos, kNlos };

std::string subset_name(Subset s);
std::string split_name(Split s);

struct MetricReport {
  std::string method;
  std::string metric;  // atrr_s | bctpa | atrr_p
  std::string split;
  std::string subset;
  int b = 0;
  double sigma_c = 0.0;
  int m_f = 0;
  double tb_over_td = 0.0;
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  long count = 0;
};

/// Records of `records` that belong to a LOS/NLOS subset.
std::vector<int> filter_subset(const Dataset& ds, std::span<const int> records, Subset subset);

/// Top-B selection ATRR: sum of the best rate among the first B ranked
/// W'_P entries over sum of optimal rates. rankings[i] ranks records[i].
/// Throws if a record has no rate table.
MetricReport atrr_selection(const Dataset& ds, std::span<const int> records,
                            std::span<const std::vector<int>> rankings, int b, Subset subset);

/// Fraction of predictions whose group contains the true BCT. Throws on
/// empty input.
MetricReport bctpa(std::span<const int> true_bct, std::span<const int> predicted_groups);

/// Predicted BCT (in T_d units, >= 1) for the record at an alignment instant.
using BctPolicy = std::function<int(int record)>;

/// Simulates align-and-hold over every scenario whose records are listed:
/// the first alignment happens at r = S, the optimal pair is held for the
/// predicted M snapshots and realigned afterwards. Held pairs earn the
/// rate in the stored table of each later snapshot; the snapshot of each
/// alignment loses the fraction T_b/T_d. Every alignment is charged,
/// including the first.
MetricReport atrr_policy(const Dataset& ds, std::span<const int> scenarios,
                         const BctPolicy& policy, double tb_over_td);

/// Ranks the W'_P entries for a VDF (G x 4) and an MS location.
using VdfRanker = std::function<std::vector<int>(const Eigen::MatrixXd& vdf, const Vec2& loc)>;

/// For each sigma, perturbs every MS location with N(0, sigma^2) per axis
/// (seeded per sigma index), rebuilds the VDF from the stored detections,
/// and reports Top-B ATRR on the LOS and NLOS subsets.
std::vector<MetricReport> robustness_sweep(const Dataset& ds, std::span<const int> records,
                                           const VdfRanker& ranker, std::span<const double> sigmas,
                                           int b, std::uint64_t seed);

/// Scenario ids that appear among `records`, ascending.
std::vector<int> scenarios_of(const Dataset& ds, std::span<const int> records);

}  // namespace beamlab
