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

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "beamlab/config.hpp"
#include "beamlab/dataset.hpp"
#include "beamlab/eval.hpp"
#include "binary_io.hpp"

namespace beamlab {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw std::runtime_error("export: cannot open " + path.string());
  return out;
}

}  // namespace

void export_dataset(const Dataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  const std::string stamp = "# config_hash=" + hex64(ds.header.config_hash) + "\n";

  auto pairs = open_out(root / "pairs.csv", false);
  pairs << stamp << "label,full_pair,tx,rx\n";
  for (int p = 0; p < ds.header.pairs.size(); ++p) {
    pairs << p << ',' << ds.header.pairs.full_index(p) << ',' << ds.header.pairs.tx(p) << ','
          << ds.header.pairs.rx(p) << '\n';
  }

  const std::size_t vdf_len = static_cast<std::size_t>(ds.header.grid.count()) * 4;
  const std::size_t pool_len = static_cast<std::size_t>(ds.pool_size());
  const std::size_t sif_len = static_cast<std::size_t>(ds.header.sif_height) *
                              ds.header.sif_width * ds.header.sif_channels;
  auto index = open_out(root / "index.csv", false);
  auto vdf = open_out(root / "vdf.f32", true);
  auto pool = open_out(root / "sif_pool.f32", true);
  std::ofstream sif;
  if (ds.header.store_sif) sif = open_out(root / "sif.f32", true);
  index << stamp
        << "record,q,r,split,time,x,y,los,beam_label,full_pair,bct_label,bct_group,"
           "optimal_rate,vdf_offset,sif_pool_offset,sif_offset\n";
  index.precision(17);
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const DatasetRecord& rec = ds.records[i];
    if (rec.vdf.size() != vdf_len || rec.sif_pool.size() != pool_len) {
      throw std::runtime_error("export: record " + std::to_string(i) + " has wrong feature size");
    }
    detail::write_le_array(vdf, rec.vdf.data(), rec.vdf.size());
    detail::write_le_array(pool, rec.sif_pool.data(), rec.sif_pool.size());
    long long sif_offset = -1;
    if (ds.header.store_sif) {
      detail::write_le_array(sif, rec.sif.data(), rec.sif.size());
      sif_offset = static_cast<long long>(i * sif_len);
    }
    index << i << ',' << rec.q << ',' << rec.r << ','
          << split_name(ds.header.scenario_split.at(rec.q)) << ',' << rec.time << ','
          << rec.ms_location.x() << ',' << rec.ms_location.y() << ',' << (rec.los ? 1 : 0) << ','
          << rec.beam_label << ',' << rec.full_pair << ',' << rec.bct_label << ','
          << rec.bct_group << ',' << rec.optimal_rate << ',' << i * vdf_len << ','
          << i * pool_len << ',' << sif_offset << '\n';
  }
  if (!index || !vdf || !pool || (ds.header.store_sif && !sif)) {
    throw std::runtime_error("export: write failed in " + dir);
  }
}

}  // namespace beamlab
