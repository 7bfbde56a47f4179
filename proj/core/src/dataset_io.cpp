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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "beamlab/dataset.hpp"
#include "beamlab/seeds.hpp"
#include "binary_io.hpp"
#include "dataset_format.hpp"
#include "json.hpp"

namespace beamlab {

namespace detail {

namespace {

constexpr char kMagic[] = "BEAMLAB-DATASET 1\n";

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v, std::size_t expected,
               const char* what) {
  if (v.size() != expected) {
    throw std::runtime_error(std::string("dataset record: wrong ") + what + " length");
  }
  write_le_array(out, v.data(), v.size());
}

template <typename T>
std::vector<T> read_vec(std::istream& in, std::size_t n) {
  std::vector<T> v(n);
  read_le_array(in, v.data(), n);
  return v;
}

}  // namespace

// Layout (little-endian):
//   int32 q, r, beam_label, full_pair, bct_label, bct_group, los
//   float64 time, ms_x, ms_y, optimal_rate
//   float32 vdf[G*4], sif_pool[ph*pw*3C], sif[H*W*3C] (only if stored)
//   float64 rate_table[|W'_P|]
//   int32 detection_count, then per detection:
//     int32 camera, object; float64 l, w, h, cx, cy, cz, azimuth
void write_record(std::ostream& out, const DatasetRecord& rec, const DatasetHeader& h) {
  for (int v : {rec.q, rec.r, rec.beam_label, rec.full_pair, rec.bct_label, rec.bct_group,
                rec.los ? 1 : 0}) {
    write_le<std::int32_t>(out, v);
  }
  for (double v : {rec.time, rec.ms_location.x(), rec.ms_location.y(), rec.optimal_rate}) {
    write_le<double>(out, v);
  }
  write_vec(out, rec.vdf, static_cast<std::size_t>(h.grid.count()) * 4, "VDF");
  write_vec(out, rec.sif_pool,
            static_cast<std::size_t>(h.pool_height) * h.pool_width * h.sif_channels, "pooled SIF");
  if (h.store_sif) {
    write_vec(out, rec.sif, static_cast<std::size_t>(h.sif_height) * h.sif_width * h.sif_channels,
              "SIF");
  }
  write_vec(out, rec.rate_table, static_cast<std::size_t>(h.pairs.size()), "rate table");
  write_le<std::int32_t>(out, static_cast<std::int32_t>(rec.detections.size()));
  for (const auto& d : rec.detections) {
    write_le<std::int32_t>(out, d.camera);
    write_le<std::int32_t>(out, d.object);
    for (double v : {d.size.x(), d.size.y(), d.size.z(), d.center_ccs.x(), d.center_ccs.y(),
                     d.center_ccs.z(), d.azimuth_ccs}) {
      write_le<double>(out, v);
    }
  }
}

DatasetRecord read_record(std::istream& in, const DatasetHeader& h) {
  DatasetRecord rec;
  rec.q = read_le<std::int32_t>(in);
  rec.r = read_le<std::int32_t>(in);
  rec.beam_label = read_le<std::int32_t>(in);
  rec.full_pair = read_le<std::int32_t>(in);
  rec.bct_label = read_le<std::int32_t>(in);
  rec.bct_group = read_le<std::int32_t>(in);
  rec.los = read_le<std::int32_t>(in) != 0;
  rec.time = read_le<double>(in);
  rec.ms_location.x() = read_le<double>(in);
  rec.ms_location.y() = read_le<double>(in);
  rec.optimal_rate = read_le<double>(in);
  rec.vdf = read_vec<float>(in, static_cast<std::size_t>(h.grid.count()) * 4);
  rec.sif_pool =
      read_vec<float>(in, static_cast<std::size_t>(h.pool_height) * h.pool_width * h.sif_channels);
  if (h.store_sif) {
    rec.sif =
        read_vec<float>(in, static_cast<std::size_t>(h.sif_height) * h.sif_width * h.sif_channels);
  }
  rec.rate_table = read_vec<double>(in, static_cast<std::size_t>(h.pairs.size()));
  const int count = read_le<std::int32_t>(in);
  if (count < 0) throw std::runtime_error("dataset record: negative detection count");
  for (int i = 0; i < count; ++i) {
    Detection d;
    d.camera = read_le<std::int32_t>(in);
    d.object = read_le<std::int32_t>(in);
    for (int a = 0; a < 3; ++a) d.size[a] = read_le<double>(in);
    for (int a = 0; a < 3; ++a) d.center_ccs[a] = read_le<double>(in);
    d.azimuth_ccs = read_le<double>(in);
    rec.detections.push_back(d);
  }
  if (rec.beam_label < 0 || rec.beam_label >= h.pairs.size()) {
    throw std::runtime_error("dataset record: beam label outside W'_P");
  }
  return rec;
}

std::uint64_t records_hash(const std::vector<DatasetRecord>& records, const DatasetHeader& h) {
  Fnv1a hash;
  for (const auto& rec : records) {
    std::ostringstream buf;
    write_record(buf, rec, h);
    hash.update(buf.view());
  }
  return hash.digest();
}

}  // namespace detail

namespace {

using nlohmann::json;

json header_to_json(const DatasetHeader& h) {
  json j;
  j["format_version"] = h.format_version;
  j["config"] = json::parse(h.config_json);
  j["config_hash"] = hex64(h.config_hash);
  j["num_scenarios"] = h.num_scenarios;
  j["snapshots_per_scenario"] = h.snapshots_per_scenario;
  j["scenario_seeds"] = h.scenario_seeds;
  std::vector<int> split;
  for (Split s : h.scenario_split) split.push_back(static_cast<int>(s));
  j["scenario_split"] = split;
  json pairs = json::array();
  for (int i = 0; i < h.pairs.size(); ++i) pairs.push_back({h.pairs.tx(i), h.pairs.rx(i)});
  j["pairs"] = {{"n_tx", h.pairs.n_tx()}, {"n_rx", h.pairs.n_rx()}, {"list", pairs}};
  j["pair_set_hash"] = hex64(pair_set_hash(h.pairs));
  json anchors = json::array();
  for (const auto& c : h.grid.cells) anchors.push_back({c[0], c[1]});
  j["grid"] = {{"cell_length", h.grid.cell_length},
               {"cell_width", h.grid.cell_width},
               {"anchors", anchors}};
  j["sif"] = {{"height", h.sif_height},          {"width", h.sif_width},
              {"channels", h.sif_channels},      {"pool_height", h.pool_height},
              {"pool_width", h.pool_width},      {"stored", h.store_sif}};
  j["sequence_length"] = h.sequence_length;
  j["snapshot_interval"] = h.snapshot_interval;
  j["noise_power"] = h.noise_power;
  j["split_seed"] = h.split_seed;
  j["records_hash"] = hex64(h.records_hash);
  return j;
}

std::uint64_t parse_hex(const json& j) {
  return std::stoull(j.get<std::string>(), nullptr, 16);
}

DatasetHeader header_from_json(const json& j) {
  DatasetHeader h;
  h.format_version = j.at("format_version").get<int>();
  if (h.format_version != 1) throw std::runtime_error("dataset: unsupported format version");
  h.config_json = j.at("config").dump();
  h.config_hash = parse_hex(j.at("config_hash"));
  h.num_scenarios = j.at("num_scenarios").get<int>();
  h.snapshots_per_scenario = j.at("snapshots_per_scenario").get<std::vector<int>>();
  h.scenario_seeds = j.at("scenario_seeds").get<std::vector<std::uint64_t>>();
  for (int s : j.at("scenario_split").get<std::vector<int>>()) {
    if (s < 0 || s > 2) throw std::runtime_error("dataset: bad split id");
    h.scenario_split.push_back(static_cast<Split>(s));
  }
  const json& p = j.at("pairs");
  const int n_rx = p.at("n_rx").get<int>();
  std::vector<int> full;
  for (const auto& e : p.at("list")) full.push_back(e.at(0).get<int>() * n_rx + e.at(1).get<int>());
  h.pairs = BeamPairSet(full, p.at("n_tx").get<int>(), n_rx);
  if (parse_hex(j.at("pair_set_hash")) != pair_set_hash(h.pairs)) {
    throw std::runtime_error("dataset: pair set hash mismatch");
  }
  const json& g = j.at("grid");
  h.grid.cell_length = g.at("cell_length").get<double>();
  h.grid.cell_width = g.at("cell_width").get<double>();
  for (const auto& a : g.at("anchors")) h.grid.cells.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
  const json& s = j.at("sif");
  h.sif_height = s.at("height").get<int>();
  h.sif_width = s.at("width").get<int>();
  h.sif_channels = s.at("channels").get<int>();
  h.pool_height = s.at("pool_height").get<int>();
  h.pool_width = s.at("pool_width").get<int>();
  h.store_sif = s.at("stored").get<bool>();
  h.sequence_length = j.at("sequence_length").get<int>();
  h.snapshot_interval = j.at("snapshot_interval").get<double>();
  h.noise_power = j.at("noise_power").get<double>();
  h.split_seed = j.at("split_seed").get<std::uint64_t>();
  h.records_hash = parse_hex(j.at("records_hash"));
  return h;
}

}  // namespace

std::uint64_t Dataset::hash() const { return fnv1a64(header_to_json(header).dump()); }

void write_dataset(const Dataset& ds, std::ostream& out) {
  const std::string text = header_to_json(ds.header).dump(1);
  out.write(detail::kMagic, sizeof(detail::kMagic) - 1);
  detail::write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& rec : ds.records) detail::write_record(out, rec, ds.header);
  if (!out) throw std::runtime_error("dataset: write failed");
}

Dataset read_dataset(std::istream& in) {
  std::string magic(sizeof(detail::kMagic) - 1, '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != detail::kMagic) throw ValidationError("dataset: not a beamlab dataset file");
  const auto len = detail::read_le<std::uint64_t>(in);
  if (len > (1ULL << 32)) throw std::runtime_error("dataset: header too large");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("dataset: truncated header");
  Dataset ds;
  try {
    ds.header = header_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("dataset: malformed header (") + e.what() + ")");
  }
  ds.config = run_config_from_json(ds.header.config_json);
  if (config_hash(ds.config) != ds.header.config_hash) {
    throw std::runtime_error("dataset: config hash mismatch");
  }
  long total = 0;
  for (int n : ds.header.snapshots_per_scenario) total += n;
  ds.records.reserve(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) ds.records.push_back(detail::read_record(in, ds.header));
  ds.rebuild_offsets();
  if (detail::records_hash(ds.records, ds.header) != ds.header.records_hash) {
    throw std::runtime_error("dataset: records hash mismatch (file corrupted?)");
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  const std::string tmp = path + ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("dataset: cannot open " + tmp + " for writing");
      write_dataset(ds, out);
      out.close();
      if (!out) throw std::runtime_error("dataset: write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("dataset: cannot open " + path);
  return read_dataset(in);
}

}  // namespace beamlab
