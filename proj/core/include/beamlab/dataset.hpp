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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "beamlab/beams.hpp"
#include "beamlab/config.hpp"
#include "beamlab/detection.hpp"
#include "beamlab/labels.hpp"
#include "beamlab/training.hpp"
#include "beamlab/vdf.hpp"

namespace beamlab {

/// One snapshot: features, labels and the per-pair rates of W'_P.
struct DatasetRecord {
  int q = 0;  // scenario, 0-based
  int r = 0;  // snapshot within the scenario, 1-based
  int beam_label = 0;  // index into W'_P
  int full_pair = 0;   // index into W_P
  int bct_label = 1;   // M_{q,r}
  int bct_group = 1;
  bool los = false;
  double time = 0.0;
  Vec2 ms_location = Vec2::Zero();
  double optimal_rate = 0.0;
  std::vector<float> vdf;       // G x 4, row-major
  std::vector<float> sif_pool;  // pooled H x W x 3C
  std::vector<float> sif;       // full H x W x 3C, only when stored
  std::vector<double> rate_table;  // |W'_P| rates, bits/s/Hz
  std::vector<Detection> detections;

  bool operator==(const DatasetRecord&) const;
};

struct DatasetHeader {
  int format_version = 1;
  std::string config_json;
  std::uint64_t config_hash = 0;
  int num_scenarios = 0;
  std::vector<int> snapshots_per_scenario;
  std::vector<std::uint64_t> scenario_seeds;
  std::vector<Split> scenario_split;
  BeamPairSet pairs;
  GridConfig grid;
  int sif_height = 0, sif_width = 0, sif_channels = 0;
  int pool_height = 0, pool_width = 0;
  bool store_sif = false;
  int sequence_length = 3;
  double snapshot_interval = 0.05;
  double noise_power = 0.0;
  std::uint64_t split_seed = 0;
  std::uint64_t records_hash = 0;
};

class Dataset {
 public:
  DatasetHeader header;
  RunConfig config;
  std::vector<DatasetRecord> records;  // ordered by (q, r)

  /// Hash of the canonical header, which itself covers the records.
  std::uint64_t hash() const;
  std::vector<CameraMount> mounts() const { return camera_ring_for(config.scenario); }
  Split split_of(int record) const { return header.scenario_split.at(records.at(record).q); }
  /// Record indices of one split in (q, r) order.
  std::vector<int> indices(Split split) const;
  /// Records with at least S snapshots of history (r >= S) in a split.
  std::vector<int> bct_eligible(Split split) const;
  /// Index of record (q, r); throws if absent.
  int record_index(int q, int r) const;
  int pool_size() const { return header.pool_height * header.pool_width * header.sif_channels; }

  void rebuild_offsets();

 private:
  std::vector<int> offsets_;
};

std::uint64_t pair_set_hash(const BeamPairSet& pairs);

/// scenario -> trajectory -> channel -> labels -> features for every
/// scenario, on up to `workers` threads. The result does not depend on the
/// worker count.
Dataset generate_dataset(const RunConfig& cfg, int workers,
                         const std::function<void(std::string_view)>& log = {});

/// Binary file: a magic line, a little-endian u64 header length, the
/// header as JSON, then fixed-layout little-endian records. Writes to a
/// temporary file and renames it, so failures leave no partial output.
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& ds, std::ostream& out);
Dataset read_dataset(std::istream& in);

/// Writes features and labels for external training into `dir`:
///   index.csv      one row per record (labels, split, offsets)
///   pairs.csv      W'_P as (label, full_pair, tx, rx)
///   vdf.f32        G x 4 per record, little-endian float32
///   sif_pool.f32   pooled scene images per record
///   sif.f32        full scene images, when the dataset stores them
/// Each CSV starts with a `# config_hash=` line.
void export_dataset(const Dataset& ds, const std::string& dir);

/// VDBAN inputs for the given records (VDF widened to double).
LabeledSet vdban_inputs(const Dataset& ds, std::span<const int> records);

/// Pooled scene images of snapshots r-S+1 .. r stacked oldest first, one
/// row per record. Records with r < S are rejected.
Eigen::MatrixXd bct_inputs(const Dataset& ds, std::span<const int> records);

}  // namespace beamlab
