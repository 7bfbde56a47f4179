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

#include "beamlab/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "beamlab/channel.hpp"
#include "beamlab/parallel.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/seeds.hpp"
#include "beamlab/sif.hpp"
#include "dataset_format.hpp"

namespace beamlab {

namespace {

bool same_detection(const Detection& a, const Detection& b) {
  return a.camera == b.camera && a.object == b.object && a.size == b.size &&
         a.center_ccs == b.center_ccs && a.azimuth_ccs == b.azimuth_ccs;
}

}  // namespace

bool DatasetRecord::operator==(const DatasetRecord& o) const {
  if (detections.size() != o.detections.size()) return false;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (!same_detection(detections[i], o.detections[i])) return false;
  }
  return q == o.q && r == o.r && beam_label == o.beam_label && full_pair == o.full_pair &&
         bct_label == o.bct_label && bct_group == o.bct_group && los == o.los &&
         time == o.time && ms_location == o.ms_location && optimal_rate == o.optimal_rate &&
         vdf == o.vdf && sif_pool == o.sif_pool && sif == o.sif && rate_table == o.rate_table;
}

void Dataset::rebuild_offsets() {
  offsets_.assign(header.num_scenarios + 1, 0);
  for (int q = 0; q < header.num_scenarios; ++q) {
    offsets_[q + 1] = offsets_[q] + header.snapshots_per_scenario.at(q);
  }
  if (offsets_.back() != static_cast<int>(records.size())) {
    throw std::runtime_error("dataset: record count does not match the header");
  }
}

int Dataset::record_index(int q, int r) const {
  if (q < 0 || q >= header.num_scenarios || r < 1 || r > header.snapshots_per_scenario[q]) {
    throw std::out_of_range("dataset: no record (" + std::to_string(q) + ", " +
                            std::to_string(r) + ")");
  }
  return offsets_.at(q) + r - 1;
}

std::vector<int> Dataset::indices(Split split) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    if (split_of(i) == split) out.push_back(i);
  }
  return out;
}

std::vector<int> Dataset::bct_eligible(Split split) const {
  std::vector<int> out;
  for (int i : indices(split)) {
    if (records[i].r >= header.sequence_length) out.push_back(i);
  }
  return out;
}

std::uint64_t pair_set_hash(const BeamPairSet& pairs) {
  Fnv1a h;
  h.update_value(static_cast<std::int64_t>(pairs.n_tx()));
  h.update_value(static_cast<std::int64_t>(pairs.n_rx()));
  for (int p : pairs.pairs()) h.update_value(static_cast<std::int64_t>(p));
  return h.digest();
}

namespace {

struct Work {
  DatasetRecord record;
  std::vector<PathParam> paths;
  double energy = 0.0;
};

std::vector<float> to_float(const Eigen::MatrixXd& m) {
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(static_cast<float>(m(i, j)));
  }
  return out;
}

}  // namespace

Dataset generate_dataset(const RunConfig& cfg, int workers,
                         const std::function<void(std::string_view)>& log) {
  cfg.validate();
  const auto say = [&](const std::string& s) {
    if (log) log(s);
  };
  const int q_count = cfg.num_scenarios;
  const ScenarioConfig& sc_cfg = cfg.scenario;
  const std::vector<CameraMount> mounts = camera_ring_for(sc_cfg);
  const GridConfig grid = make_grid(sc_cfg.lanes, cfg.features.cell_length, cfg.features.cell_width);
  if (grid.count() == 0) throw ValidationError("features: grid has no cells on the lanes");
  const Codebook cb_tx = dft_codebook(cfg.channel.num_bs_antennas, cfg.codebook.tx_size);
  const Codebook cb_rx = dft_codebook(cfg.channel.num_ms_antennas, cfg.codebook.rx_size);

  Dataset ds;
  ds.config = cfg;
  DatasetHeader& hd = ds.header;
  hd.config_json = run_config_to_json(cfg, -1);
  hd.config_hash = config_hash(cfg);
  hd.num_scenarios = q_count;
  hd.grid = grid;
  hd.sif_height = sc_cfg.image_height;
  hd.sif_width = sc_cfg.image_width;
  hd.sif_channels = 3 * sc_cfg.num_cameras;
  const int block = cfg.features.sif_pool_block;
  hd.pool_height = (hd.sif_height + block - 1) / block;
  hd.pool_width = (hd.sif_width + block - 1) / block;
  hd.store_sif = cfg.features.store_sif;
  hd.sequence_length = cfg.features.sequence_length;
  hd.snapshot_interval = sc_cfg.snapshot_interval;
  for (int q = 0; q < q_count; ++q) {
    hd.scenario_seeds.push_back(derive_seed(cfg.master_seed, SeedStage::kScenario, q));
  }

  // Pass 1: scenes, paths, detections and features.
  say("simulating " + std::to_string(q_count) + " scenarios");
  std::vector<std::vector<Work>> per_scenario(q_count);
  parallel_for(q_count, workers, [&](std::size_t qi) {
    const int q = static_cast<int>(qi);
    const Scenario scenario = spawn_scenario(hd.scenario_seeds[q], sc_cfg);
    const std::vector<Snapshot> traj = sample_trajectory(scenario);
    auto& out = per_scenario[q];
    for (const Snapshot& snap : traj) {
      Work w;
      DatasetRecord& rec = w.record;
      rec.q = q;
      rec.r = snap.index;
      rec.time = snap.time;
      rec.ms_location = snap.ms_location;
      const std::vector<Reflector> scene = scene_reflectors(scenario, snap);
      w.paths = trace_paths(scene, sc_cfg.rsu_position, snap.ms_antenna, cfg.channel);
      w.energy = channel_energy(w.paths, cfg.channel);
      rec.los = los_status(scene, sc_cfg.rsu_position, snap.ms_antenna);
      const auto dets = detect_vehicles(
          snap, mounts, cfg.features.detection_noise,
          derive_seed(cfg.master_seed, SeedStage::kDetection, q, snap.index));
      for (const auto& cam : dets) rec.detections.insert(rec.detections.end(), cam.begin(), cam.end());
      rec.vdf = to_float(build_vdf(rec.detections, mounts, rec.ms_location, grid));
      const SceneImage sif = build_sif(snap, mounts, rec.detections, sc_cfg.buildings);
      rec.sif_pool = pool_sif(sif, block).data;
      if (hd.store_sif) rec.sif = sif.data;
      out.push_back(std::move(w));
    }
  });

  std::vector<Work> work;
  for (int q = 0; q < q_count; ++q) {
    hd.snapshots_per_scenario.push_back(static_cast<int>(per_scenario[q].size()));
    for (auto& w : per_scenario[q]) work.push_back(std::move(w));
    per_scenario[q].clear();
  }
  const long n = static_cast<long>(work.size());

  // Noise power from the average channel energy.
  double total_energy = 0.0;
  for (const auto& w : work) total_energy += w.energy;
  if (!(total_energy > 0.0)) throw std::runtime_error("dataset: every snapshot is in outage");
  ChannelConfig ch = cfg.channel;
  ch.noise_power = calibrate_noise_power(total_energy, n, ch);
  hd.noise_power = ch.noise_power;

  // Pass 2: optimal pairs over W_P.
  say("sweeping " + std::to_string(n) + " snapshots");
  parallel_for(work.size(), workers, [&](std::size_t i) {
    const auto table = pair_rates_from_paths(work[i].paths, cb_tx, cb_rx, ch);
    work[i].record.full_pair = argmax_lowest(table);
  });
  std::vector<int> full_labels;
  for (const auto& w : work) full_labels.push_back(w.record.full_pair);
  hd.pairs = restrict_pairs(full_labels, cb_tx.size(), cb_rx.size());
  say("restricted pair set has " + std::to_string(hd.pairs.size()) + " pairs");

  // Pass 3: rate tables restricted to W'_P. Recomputing gives the same bits
  // as pass 2, so the stored optimum equals its table entry exactly.
  parallel_for(work.size(), workers, [&](std::size_t i) {
    const auto table = pair_rates_from_paths(work[i].paths, cb_tx, cb_rx, ch);
    DatasetRecord& rec = work[i].record;
    rec.rate_table.resize(hd.pairs.size());
    for (int k = 0; k < hd.pairs.size(); ++k) rec.rate_table[k] = table[hd.pairs.full_index(k)];
    rec.beam_label = hd.pairs.index_of(rec.full_pair);
    rec.optimal_rate = rec.rate_table[rec.beam_label];
  });

  ds.records.reserve(work.size());
  for (auto& w : work) ds.records.push_back(std::move(w.record));
  ds.rebuild_offsets();

  // BCT labels from each scenario's optimal-pair sequence.
  for (int q = 0; q < q_count; ++q) {
    std::vector<int> seq;
    for (int r = 1; r <= hd.snapshots_per_scenario[q]; ++r) {
      seq.push_back(ds.records[ds.record_index(q, r)].full_pair);
    }
    const std::vector<int> m = label_bct_all(seq);
    for (int r = 1; r <= hd.snapshots_per_scenario[q]; ++r) {
      auto& rec = ds.records[ds.record_index(q, r)];
      rec.bct_label = m[r - 1];
      rec.bct_group = group_bct(rec.bct_label);
    }
  }

  hd.split_seed = derive_seed(cfg.master_seed, SeedStage::kSplit);
  hd.scenario_split = split_dataset(q_count, cfg.split, hd.split_seed);
  hd.records_hash = detail::records_hash(ds.records, hd);
  return ds;
}

LabeledSet vdban_inputs(const Dataset& ds, std::span<const int> records) {
  const int g4 = ds.header.grid.count() * 4;
  LabeledSet s;
  s.vdf.resize(static_cast<Eigen::Index>(records.size()), g4);
  s.loc.resize(static_cast<Eigen::Index>(records.size()), 2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = ds.records.at(records[i]);
    if (static_cast<int>(rec.vdf.size()) != g4) throw std::runtime_error("dataset: VDF size");
    for (int k = 0; k < g4; ++k) s.vdf(static_cast<Eigen::Index>(i), k) = rec.vdf[k];
    s.loc.row(static_cast<Eigen::Index>(i)) = rec.ms_location.transpose();
    s.labels.push_back(rec.beam_label);
  }
  return s;
}

Eigen::MatrixXd bct_inputs(const Dataset& ds, std::span<const int> records) {
  const int s = ds.header.sequence_length;
  const int p = ds.pool_size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(s) * p);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = ds.records.at(records[i]);
    if (rec.r < s) throw std::invalid_argument("bct_inputs: record has fewer than S predecessors");
    for (int step = 0; step < s; ++step) {
      const auto& src = ds.records[ds.record_index(rec.q, rec.r - s + 1 + step)];
      for (int k = 0; k < p; ++k) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(step) * p + k) = src.sif_pool[k];
      }
    }
  }
  return x;
}

}  // namespace beamlab
