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

#include "beamlab/eval.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "beamlab/seeds.hpp"
#include "beamlab/vdf.hpp"

namespace beamlab {

std::string subset_name(Subset s) {
  switch (s) {
    case Subset::kAll: return "all";
    case Subset::kLos: return "los";
    case Subset::kNlos: return "nlos";
  }
  return "?";
}

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

std::vector<int> filter_subset(const Dataset& ds, std::span<const int> records, Subset subset) {
  std::vector<int> out;
  for (int i : records) {
    const bool los = ds.records.at(i).los;
    if (subset == Subset::kAll || (subset == Subset::kLos) == los) out.push_back(i);
  }
  return out;
}

MetricReport atrr_selection(const Dataset& ds, std::span<const int> records,
                            std::span<const std::vector<int>> rankings, int b, Subset subset) {
  if (rankings.size() != records.size()) {
    throw std::invalid_argument("atrr_selection: one ranking per record required");
  }
  MetricReport rep;
  rep.metric = "atrr_s";
  rep.subset = subset_name(subset);
  rep.b = b;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = ds.records.at(records[i]);
    if (subset == Subset::kLos && !rec.los) continue;
    if (subset == Subset::kNlos && rec.los) continue;
    if (rec.rate_table.empty()) {
      throw std::runtime_error("atrr_selection: record without a rate table");
    }
    rep.numerator += top_b_rate(rec.rate_table, rankings[i], b);
    rep.denominator += rec.optimal_rate;
    ++rep.count;
  }
  rep.value = rep.denominator > 0.0 ? rep.numerator / rep.denominator : 0.0;
  return rep;
}

MetricReport bctpa(std::span<const int> true_bct, std::span<const int> predicted_groups) {
  if (true_bct.size() != predicted_groups.size()) {
    throw std::invalid_argument("bctpa: one prediction per record required");
  }
  if (true_bct.empty()) throw std::invalid_argument("bctpa: no eligible records");
  MetricReport rep;
  rep.metric = "bctpa";
  rep.subset = "all";
  for (std::size_t i = 0; i < true_bct.size(); ++i) {
    if (group_contains(predicted_groups[i], true_bct[i])) rep.numerator += 1.0;
  }
  rep.denominator = static_cast<double>(true_bct.size());
  rep.count = static_cast<long>(true_bct.size());
  rep.value = rep.numerator / rep.denominator;
  return rep;
}

MetricReport atrr_policy(const Dataset& ds, std::span<const int> scenarios,
                         const BctPolicy& policy, double tb_over_td) {
  if (!(tb_over_td >= 0.0 && tb_over_td < 1.0)) {
    throw std::invalid_argument("atrr_policy: T_b/T_d must lie in [0, 1)");
  }
  const int s = ds.header.sequence_length;
  double held = 0.0;     // sum of rates earned by the held pairs
  double aligned = 0.0;  // the part of `held` earned at alignment snapshots
  double optimal = 0.0;
  long count = 0;
  for (int q : scenarios) {
    const int sq = ds.header.snapshots_per_scenario.at(q);
    int r = s;
    while (r <= sq) {
      const int at = ds.record_index(q, r);
      const int beam = ds.records[at].beam_label;
      const int m = policy(at);
      if (m < 1) throw std::runtime_error("atrr_policy: predicted BCT must be >= 1");
      for (int j = r; j < r + m && j <= sq; ++j) {
        const auto& rec = ds.records[ds.record_index(q, j)];
        const double rate = rec.rate_table.at(beam);
        held += rate;
        if (j == r) aligned += rate;
        optimal += rec.optimal_rate;
        ++count;
      }
      r += m;
    }
  }
  MetricReport rep;
  rep.metric = "atrr_p";
  rep.subset = "all";
  rep.tb_over_td = tb_over_td;
  rep.count = count;
  rep.denominator = optimal;
  rep.numerator = held - tb_over_td * aligned;
  // Dividing each sum separately keeps the identities exact: a perfect
  // policy gives held == optimal, always-align gives aligned == optimal.
  rep.value = optimal > 0.0 ? held / optimal - tb_over_td * (aligned / optimal) : 0.0;
  return rep;
}

std::vector<MetricReport> robustness_sweep(const Dataset& ds, std::span<const int> records,
                                           const VdfRanker& ranker, std::span<const double> sigmas,
                                           int b, std::uint64_t seed) {
  const auto mounts = ds.mounts();
  const GridConfig& grid = ds.header.grid;
  std::vector<MetricReport> out;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    if (!(sigma >= 0.0)) throw std::invalid_argument("robustness_sweep: sigma must be >= 0");
    std::mt19937_64 rng(derive_seed(seed, SeedStage::kRobustness, si));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<int>> rankings;
    rankings.reserve(records.size());
    for (int idx : records) {
      const auto& rec = ds.records.at(idx);
      Vec2 loc = rec.ms_location;
      const double nx = gauss(rng);
      const double ny = gauss(rng);
      loc.x() += sigma * nx;
      loc.y() += sigma * ny;
      // Same float rounding as the stored VDF, so sigma = 0 reproduces it.
      const Eigen::MatrixXd vdf =
          build_vdf(rec.detections, mounts, loc, grid).cast<float>().cast<double>();
      rankings.push_back(ranker(vdf, loc));
    }
    for (Subset sub : {Subset::kLos, Subset::kNlos}) {
      MetricReport rep = atrr_selection(ds, records, rankings, b, sub);
      rep.sigma_c = sigma;
      out.push_back(rep);
    }
  }
  return out;
}

std::vector<int> scenarios_of(const Dataset& ds, std::span<const int> records) {
  std::vector<int> qs;
  for (int i : records) qs.push_back(ds.records.at(i).q);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

}  // namespace beamlab
