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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beamlab/baselines.hpp"
#include "beamlab/dataset.hpp"
#include "beamlab/eval.hpp"
#include "beamlab/training.hpp"
#include "beamlab/vdban.hpp"

namespace beamlab {

/// Architecture of `cfg.vdban` bound to the grid and W'_P of a dataset.
VdbanConfig bound_vdban_config(const Dataset& ds, const VdbanConfig& cfg);

/// Ranked W'_P entries for each record, best first.
std::vector<std::vector<int>> rank_with_vdban(const VdbanModel& model, const Dataset& ds,
                                              std::span<const int> records);
std::vector<std::vector<int>> rank_with_knn(const LocationKnn& knn, const Dataset& ds,
                                            std::span<const int> records, int workers = 1);
/// Ground-truth label first, the other pairs after it in index order.
std::vector<std::vector<int>> rank_oracle(const Dataset& ds, std::span<const int> records);

/// k-NN over the MS locations of the training split.
LocationKnn fit_knn(const Dataset& ds, int k);

/// Trains VDBAN on the training split, selecting the epoch with the best
/// Top-1 selection ATRR on the validation split.
TrainResult train_vdban_on(const Dataset& ds, const RunConfig& cfg,
                           const std::function<void(const EpochStats&)>& on_epoch = {});

struct BctTrainResult {
  BctClassifier model;
  std::vector<double> epoch_loss;
};

/// Trains the BCT group classifier on eligible training records,
/// oversampling minority groups when `cfg.bct_resample` is set.
BctTrainResult train_bct_on(const Dataset& ds, const RunConfig& cfg);

/// Predicted group of every record in `records` (all must have r >= S).
std::vector<int> predict_bct_groups(const BctClassifier& model, const Dataset& ds,
                                    std::span<const int> records);

struct EvalModels {
  const VdbanModel* vdban = nullptr;
  const BctClassifier* bct = nullptr;
  bool knn = true;
  bool oracle = false;
};

/// Report rows for the test split:
///   topb       selection ATRR for every B, per method and LOS/NLOS subset
///   robustness Top-B ATRR under MS location noise, per sigma_c
///   bctpa      BCT group accuracy of the classifier
///   policy     ATRR_p of fixed-M_f, perfect-BCT and predicted-BCT policies
struct EvalRow {
  std::string experiment;
  MetricReport report;
};
std::vector<EvalRow> evaluate(const Dataset& ds, const EvalModels& models, const EvalConfig& cfg,
                              std::uint64_t seed, int workers = 1);

/// Column order of the report CSV.
inline constexpr const char* kReportColumns =
    "experiment,method,metric,split,subset,B,sigma_c,m_f,tb_over_td,value,numerator,"
    "denominator,n";

/// A `# config_hash=` comment line, the header, then one row per report.
void write_report_csv(std::ostream& out, std::span<const EvalRow> rows,
                      std::uint64_t config_hash);
std::vector<EvalRow> read_report_csv(std::istream& in, std::uint64_t* config_hash);

/// x,y plot series derived from report rows: `series,x,y` where x is B
/// (topb), sigma_c (robustness) or M_f (policy, fixed policies only).
void write_plot_series(std::ostream& out, std::span<const EvalRow> rows,
                       std::uint64_t config_hash);

}  // namespace beamlab
