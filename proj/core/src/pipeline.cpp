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

#include "beamlab/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "beamlab/config.hpp"
#include "beamlab/labels.hpp"
#include "beamlab/optimizer.hpp"
#include "beamlab/parallel.hpp"
#include "beamlab/seeds.hpp"

namespace beamlab {

namespace {

constexpr Eigen::Index kForwardBatch = 512;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

VdbanConfig bound_vdban_config(const Dataset& ds, const VdbanConfig& cfg) {
  VdbanConfig c = cfg;
  c.grid_cells = ds.header.grid.count();
  c.num_classes = ds.header.pairs.size();
  return c;
}

std::vector<std::vector<int>> rank_with_vdban(const VdbanModel& model, const Dataset& ds,
                                              std::span<const int> records) {
  std::vector<std::vector<int>> out;
  out.reserve(records.size());
  const auto n = static_cast<Eigen::Index>(records.size());
  for (Eigen::Index start = 0; start < n; start += kForwardBatch) {
    const Eigen::Index end = std::min(n, start + kForwardBatch);
    const LabeledSet batch = vdban_inputs(ds, records.subspan(start, end - start));
    const Eigen::MatrixXd logits = model.forward(batch.vdf, batch.loc);
    for (Eigen::Index i = 0; i < logits.rows(); ++i) out.push_back(rank_scores(logits.row(i)));
  }
  return out;
}

std::vector<std::vector<int>> rank_with_knn(const LocationKnn& knn, const Dataset& ds,
                                            std::span<const int> records, int workers) {
  std::vector<std::vector<int>> out(records.size());
  parallel_for(static_cast<int>(records.size()), workers,
               [&](int i) { out[i] = knn.rank(ds.records.at(records[i]).ms_location); });
  return out;
}

std::vector<std::vector<int>> rank_oracle(const Dataset& ds, std::span<const int> records) {
  const int n = ds.header.pairs.size();
  std::vector<std::vector<int>> out;
  out.reserve(records.size());
  for (int idx : records) {
    const int label = ds.records.at(idx).beam_label;
    std::vector<int> ranking{label};
    for (int p = 0; p < n; ++p) {
      if (p != label) ranking.push_back(p);
    }
    out.push_back(std::move(ranking));
  }
  return out;
}

LocationKnn fit_knn(const Dataset& ds, int k) {
  std::vector<Vec2> locations;
  std::vector<int> labels;
  for (int idx : ds.indices(Split::kTrain)) {
    locations.push_back(ds.records[idx].ms_location);
    labels.push_back(ds.records[idx].beam_label);
  }
  if (locations.empty()) throw ValidationError("k-NN: the training split is empty");
  return LocationKnn(std::move(locations), std::move(labels), ds.header.pairs.size(), k);
}

TrainResult train_vdban_on(const Dataset& ds, const RunConfig& cfg,
                           const std::function<void(const EpochStats&)>& on_epoch) {
  const std::vector<int> train_idx = ds.indices(Split::kTrain);
  const std::vector<int> val_idx = ds.indices(Split::kValidation);
  if (train_idx.empty()) throw ValidationError("train: the training split is empty");
  const LabeledSet train = vdban_inputs(ds, train_idx);
  VdbanModel model(bound_vdban_config(ds, cfg.vdban),
                   derive_seed(cfg.master_seed, SeedStage::kTrain, 0));
  auto validate = [&](const VdbanModel& m) {
    if (val_idx.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto rankings = rank_with_vdban(m, ds, val_idx);
    return atrr_selection(ds, val_idx, rankings, 1, Subset::kAll).value;
  };
  return train_vdban(std::move(model), train, cfg.train,
                     derive_seed(cfg.master_seed, SeedStage::kTrain, 1), validate, on_epoch);
}

BctTrainResult train_bct_on(const Dataset& ds, const RunConfig& cfg) {
  std::vector<int> records = ds.bct_eligible(Split::kTrain);
  if (records.empty()) throw ValidationError("train: no training records with r >= S");
  std::vector<int> groups;
  for (int idx : records) groups.push_back(ds.records[idx].bct_group);
  if (cfg.bct_resample) {
    std::vector<int> picked;
    for (int i : resample_balanced(groups, derive_seed(cfg.master_seed, SeedStage::kBctTrain, 1))) {
      picked.push_back(records[i]);
    }
    records = std::move(picked);
  }
  const Eigen::MatrixXd x = bct_inputs(ds, records);
  std::vector<int> classes;
  for (int idx : records) classes.push_back(ds.records[idx].bct_group - 1);
  BctTrainResult out;
  out.model = BctClassifier(static_cast<int>(x.cols()), cfg.bct,
                            derive_seed(cfg.master_seed, SeedStage::kBctTrain, 0));
  out.epoch_loss =
      out.model.fit(x, classes, derive_seed(cfg.master_seed, SeedStage::kBctTrain, 2));
  return out;
}

std::vector<int> predict_bct_groups(const BctClassifier& model, const Dataset& ds,
                                    std::span<const int> records) {
  std::vector<int> out;
  out.reserve(records.size());
  const auto n = static_cast<std::ptrdiff_t>(records.size());
  for (std::ptrdiff_t start = 0; start < n; start += kForwardBatch) {
    const std::ptrdiff_t end = std::min<std::ptrdiff_t>(n, start + kForwardBatch);
    const auto groups = model.predict_groups(bct_inputs(ds, records.subspan(start, end - start)));
    out.insert(out.end(), groups.begin(), groups.end());
  }
  return out;
}

std::vector<EvalRow> evaluate(const Dataset& ds, const EvalModels& models, const EvalConfig& cfg,
                              std::uint64_t seed, int workers) {
  const Split split = Split::kTest;
  const std::vector<int> test = ds.indices(split);
  if (test.empty()) throw ValidationError("eval: the test split is empty");
  std::vector<EvalRow> rows;
  auto add = [&](const std::string& experiment, const std::string& method, MetricReport rep) {
    rep.method = method;
    rep.split = split_name(split);
    rows.push_back({experiment, std::move(rep)});
  };

  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> rankers;
  if (models.oracle) rankers.emplace_back("oracle", rank_oracle(ds, test));
  if (models.vdban) rankers.emplace_back("vdban", rank_with_vdban(*models.vdban, ds, test));
  std::unique_ptr<LocationKnn> knn;
  if (models.knn) {
    knn = std::make_unique<LocationKnn>(fit_knn(ds, cfg.knn_k));
    rankers.emplace_back("knn", rank_with_knn(*knn, ds, test, workers));
  }
  for (const auto& [method, rankings] : rankers) {
    for (int b : cfg.top_b) {
      for (Subset sub : {Subset::kAll, Subset::kLos, Subset::kNlos}) {
        add("topb", method, atrr_selection(ds, test, rankings, b, sub));
      }
    }
  }

  if (models.vdban) {
    const VdbanModel& m = *models.vdban;
    VdfRanker ranker = [&m](const Eigen::MatrixXd& vdf, const Vec2& loc) {
      Eigen::MatrixXd flat(1, vdf.size());
      for (Eigen::Index r = 0; r < vdf.rows(); ++r) {
        for (Eigen::Index c = 0; c < vdf.cols(); ++c) flat(0, r * vdf.cols() + c) = vdf(r, c);
      }
      Eigen::MatrixXd l(1, 2);
      l << loc.x(), loc.y();
      return rank_scores(m.forward(flat, l).row(0));
    };
    for (auto& rep : robustness_sweep(ds, test, ranker, cfg.sigma_c, cfg.robustness_b, seed)) {
      add("robustness", "vdban", rep);
    }
  }
  if (knn) {
    const LocationKnn& k = *knn;
    VdfRanker ranker = [&k](const Eigen::MatrixXd&, const Vec2& loc) { return k.rank(loc); };
    for (auto& rep : robustness_sweep(ds, test, ranker, cfg.sigma_c, cfg.robustness_b, seed)) {
      add("robustness", "knn", rep);
    }
  }

  const std::vector<int> eligible = ds.bct_eligible(split);
  std::unordered_map<int, int> predicted;
  if (!eligible.empty()) {
    std::vector<int> truth;
    for (int idx : eligible) truth.push_back(ds.records[idx].bct_label);
    for (int g = 1; g <= BctClassifier::kGroups; ++g) {
      add("bctpa", "const_group" + std::to_string(g),
          bctpa(truth, std::vector<int>(truth.size(), g)));
    }
    if (models.bct) {
      const auto groups = predict_bct_groups(*models.bct, ds, eligible);
      for (std::size_t i = 0; i < eligible.size(); ++i) predicted[eligible[i]] = groups[i];
      add("bctpa", "bct_classifier", bctpa(truth, groups));
    }
  }

  const std::vector<int> scenarios = scenarios_of(ds, eligible);
  if (!scenarios.empty()) {
    for (double tb : cfg.tb_over_td) {
      for (int mf : cfg.m_f) {
        MetricReport rep = atrr_policy(ds, scenarios, [mf](int) { return mf; }, tb);
        rep.m_f = mf;
        add("policy", "fixed", rep);
      }
      add("policy", "perfect_bct",
          atrr_policy(ds, scenarios, [&ds](int i) { return ds.records[i].bct_label; }, tb));
      if (models.bct) {
        add("policy", "bct_classifier",
            atrr_policy(ds, scenarios,
                        [&predicted](int i) { return group_min_bct(predicted.at(i)); }, tb));
      }
    }
  }
  return rows;
}

void write_report_csv(std::ostream& out, std::span<const EvalRow> rows,
                      std::uint64_t config_hash) {
  out << "# config_hash=" << hex64(config_hash) << '\n' << kReportColumns << '\n';
  for (const auto& row : rows) {
    const MetricReport& r = row.report;
    out << row.experiment << ',' << r.method << ',' << r.metric << ',' << r.split << ','
        << r.subset << ',' << r.b << ',' << fmt(r.sigma_c) << ',' << r.m_f << ','
        << fmt(r.tb_over_td) << ',' << fmt(r.value) << ',' << fmt(r.numerator) << ','
        << fmt(r.denominator) << ',' << r.count << '\n';
  }
}

std::vector<EvalRow> read_report_csv(std::istream& in, std::uint64_t* config_hash) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
    throw ValidationError("report: missing '# config_hash=' line");
  }
  if (config_hash) *config_hash = std::stoull(line.substr(14), nullptr, 16);
  if (!std::getline(in, line) || line != kReportColumns) {
    throw ValidationError("report: unexpected column header");
  }
  std::vector<EvalRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 13) throw ValidationError("report: malformed row: " + line);
    EvalRow row;
    row.experiment = f[0];
    MetricReport& r = row.report;
    try {
      r.method = f[1];
      r.metric = f[2];
      r.split = f[3];
      r.subset = f[4];
      r.b = std::stoi(f[5]);
      r.sigma_c = std::stod(f[6]);
      r.m_f = std::stoi(f[7]);
      r.tb_over_td = std::stod(f[8]);
      r.value = std::stod(f[9]);
      r.numerator = std::stod(f[10]);
      r.denominator = std::stod(f[11]);
      r.count = std::stol(f[12]);
    } catch (const std::exception&) {
      throw ValidationError("report: malformed row: " + line);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_plot_series(std::ostream& out, std::span<const EvalRow> rows,
                       std::uint64_t config_hash) {
  // Series keyed by name; std::map keeps the output order stable.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& row : rows) {
    const MetricReport& r = row.report;
    std::string name = row.experiment + "/" + r.method + "/" + r.split + "/" + r.subset;
    double x = 0.0;
    if (row.experiment == "topb") {
      x = r.b;
    } else if (row.experiment == "robustness") {
      name += "/B=" + std::to_string(r.b);
      x = r.sigma_c;
    } else if (row.experiment == "policy") {
      name += "/tb_over_td=" + fmt(r.tb_over_td);
      if (r.method == "fixed") x = r.m_f;
    }
    series[name].emplace_back(x, r.value);
  }
  out << "# config_hash=" << hex64(config_hash) << "\nseries,x,y\n";
  for (const auto& [name, points] : series) {
    for (const auto& [x, y] : points) out << name << ',' << fmt(x) << ',' << fmt(y) << '\n';
  }
}

}  // namespace beamlab
