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

#include "beamlab/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "beamlab/config.hpp"
#include "binary_io.hpp"
#include "json.hpp"

namespace beamlab {

namespace {

using nlohmann::json;

constexpr char kMagic[] = "BEAMLAB-CHECKPOINT 1\n";

std::uint64_t parse_hex(const json& j) { return std::stoull(j.get<std::string>(), nullptr, 16); }

json meta_json(const CheckpointMeta& m) {
  return {{"kind", m.kind},
          {"dataset_hash", hex64(m.dataset_hash)},
          {"pair_set_hash", hex64(m.pair_set_hash)},
          {"config_hash", hex64(m.config_hash)},
          {"seed", m.seed},
          {"best_epoch", m.best_epoch}};
}

CheckpointMeta meta_from(const json& j) {
  CheckpointMeta m;
  m.kind = j.at("kind").get<std::string>();
  m.dataset_hash = parse_hex(j.at("dataset_hash"));
  m.pair_set_hash = parse_hex(j.at("pair_set_hash"));
  m.config_hash = parse_hex(j.at("config_hash"));
  m.seed = j.at("seed").get<std::uint64_t>();
  m.best_epoch = j.at("best_epoch").get<int>();
  return m;
}

void write_blob(std::ostream& out, const json& header, const ParameterList& params) {
  json j = header;
  json shapes = json::array();
  for (const auto& p : params) shapes.push_back({p.name, p.value.rows(), p.value.cols()});
  j["parameters"] = shapes;
  const std::string text = j.dump(1);
  out.write(kMagic, sizeof(kMagic) - 1);
  detail::write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& p : params) {
    detail::write_le_array(out, p.value.data(), static_cast<std::size_t>(p.value.size()));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

json read_header(std::istream& in) {
  std::string magic(sizeof(kMagic) - 1, '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kMagic) throw ValidationError("checkpoint: not a beamlab checkpoint");
  const auto len = detail::read_le<std::uint64_t>(in);
  if (len > (1ULL << 30)) throw std::runtime_error("checkpoint: header too large");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("checkpoint: truncated header");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("checkpoint: malformed header (") + e.what() + ")");
  }
}

void read_params(std::istream& in, const json& header, ParameterList& params) {
  const json& shapes = header.at("parameters");
  if (shapes.size() != params.size()) throw std::runtime_error("checkpoint: parameter count");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (shapes[i].at(0).get<std::string>() != p.name ||
        shapes[i].at(1).get<Eigen::Index>() != p.value.rows() ||
        shapes[i].at(2).get<Eigen::Index>() != p.value.cols()) {
      throw std::runtime_error("checkpoint: parameter " + p.name + " does not match");
    }
    detail::read_le_array(in, p.value.data(), static_cast<std::size_t>(p.value.size()));
    p.grad.setZero(p.value.rows(), p.value.cols());
  }
}

template <typename Fn>
void to_file(const std::string& path, Fn&& fn) {
  const std::string tmp = path + ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp);
      fn(out);
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("checkpoint: cannot open " + path);
  return in;
}

}  // namespace

void save_vdban(std::ostream& out, const VdbanModel& model, const CheckpointMeta& meta) {
  const VdbanConfig& c = model.config();
  json j = meta_json(meta);
  j["kind"] = "vdban";
  j["architecture"] = {{"grid_cells", c.grid_cells},     {"num_classes", c.num_classes},
                       {"model_dim", c.model_dim},       {"conv_filters", c.conv_filters},
                       {"block_dims", c.block_dims},     {"heads", c.heads},
                       {"ffn_hidden", c.ffn_hidden},     {"head_hidden", c.head_hidden},
                       {"azimuth_scale", c.azimuth_scale},
                       {"location_scale", c.location_scale}};
  write_blob(out, j, model.params());
}

VdbanModel load_vdban(std::istream& in, CheckpointMeta* meta) {
  const json j = read_header(in);
  if (j.at("kind").get<std::string>() != "vdban") {
    throw ValidationError("checkpoint: not a VDBAN checkpoint");
  }
  const json& a = j.at("architecture");
  VdbanConfig c;
  c.grid_cells = a.at("grid_cells").get<int>();
  c.num_classes = a.at("num_classes").get<int>();
  c.model_dim = a.at("model_dim").get<int>();
  c.conv_filters = a.at("conv_filters").get<int>();
  c.block_dims = a.at("block_dims").get<std::vector<int>>();
  c.heads = a.at("heads").get<int>();
  c.ffn_hidden = a.at("ffn_hidden").get<int>();
  c.head_hidden = a.at("head_hidden").get<std::vector<int>>();
  c.azimuth_scale = a.at("azimuth_scale").get<double>();
  c.location_scale = a.at("location_scale").get<double>();
  VdbanModel model(c, 0);
  read_params(in, j, model.params());
  if (meta) *meta = meta_from(j);
  return model;
}

void save_bct(std::ostream& out, const BctClassifier& model, const CheckpointMeta& meta) {
  json j = meta_json(meta);
  j["kind"] = "bct";
  j["architecture"] = {{"input_dim", model.input_dim()},
                       {"hidden", model.config().hidden},
                       {"input_scale", model.config().input_scale}};
  write_blob(out, j, model.params());
}

BctClassifier load_bct(std::istream& in, CheckpointMeta* meta) {
  const json j = read_header(in);
  if (j.at("kind").get<std::string>() != "bct") {
    throw ValidationError("checkpoint: not a BCT classifier checkpoint");
  }
  const json& a = j.at("architecture");
  BctConfig cfg;
  cfg.hidden = a.at("hidden").get<int>();
  cfg.input_scale = a.at("input_scale").get<double>();
  BctClassifier model = BctClassifier::zeros(a.at("input_dim").get<int>(), cfg);
  read_params(in, j, model.params());
  if (meta) *meta = meta_from(j);
  return model;
}

CheckpointMeta read_checkpoint_meta(std::istream& in) { return meta_from(read_header(in)); }

void save_vdban(const std::string& path, const VdbanModel& model, const CheckpointMeta& meta) {
  to_file(path, [&](std::ostream& out) { save_vdban(out, model, meta); });
}

VdbanModel load_vdban(const std::string& path, CheckpointMeta* meta) {
  auto in = open_in(path);
  return load_vdban(in, meta);
}

void save_bct(const std::string& path, const BctClassifier& model, const CheckpointMeta& meta) {
  to_file(path, [&](std::ostream& out) { save_bct(out, model, meta); });
}

BctClassifier load_bct(const std::string& path, CheckpointMeta* meta) {
  auto in = open_in(path);
  return load_bct(in, meta);
}

}  // namespace beamlab
