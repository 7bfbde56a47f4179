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

#include "beamlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "beamlab/seeds.hpp"
#include "json.hpp"

namespace beamlab {

namespace {

using nlohmann::json;

constexpr double kDeg = kPi / 180.0;

// Both directions of the JSON mapping walk the same field list, so the
// writer and the reader cannot drift apart.
class Writer {
 public:
  explicit Writer(json& node) : node_(node) { node_ = json::object(); }

  template <typename T>
  void field(const char* key, T& v) {
    node_[key] = v;
  }
  void field(const char* key, Vec2& v) { node_[key] = {v.x(), v.y()}; }
  void field(const char* key, Vec3& v) { node_[key] = {v.x(), v.y(), v.z()}; }
  void angle_deg(const char* key, double& radians) { node_[key] = radians / kDeg; }
  template <typename Fn>
  void object(const char* key, Fn&& fn) {
    Writer sub(node_[key]);
    fn(sub);
  }
  template <typename T, typename Fn>
  void list(const char* key, std::vector<T>& items, Fn&& fn) {
    json arr = json::array();
    for (auto& item : items) {
      json el;
      Writer sub(el);
      fn(sub, item);
      arr.push_back(el);
    }
    node_[key] = arr;
  }

 private:
  json& node_;
};

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  template <typename T>
  void field(const char* key, T& v) {
    if (!take(key)) return;
    try {
      v = node_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(at(key), std::string("wrong type (") + e.what() + ")");
    }
  }
  void field(const char* key, Vec2& v) { vec(key, v.data(), 2); }
  void field(const char* key, Vec3& v) { vec(key, v.data(), 3); }
  void angle_deg(const char* key, double& radians) {
    if (!node_.contains(key)) return;
    double deg = 0.0;
    field(key, deg);
    radians = deg * kDeg;
  }
  template <typename Fn>
  void object(const char* key, Fn&& fn) {
    if (!take(key)) return;
    Reader sub(node_.at(key), at(key));
    fn(sub);
    sub.finish();
  }
  template <typename T, typename Fn>
  void list(const char* key, std::vector<T>& items, Fn&& fn) {
    if (!take(key)) return;
    const json& arr = node_.at(key);
    if (!arr.is_array()) fail(at(key), "expected an array");
    items.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      T item{};
      Reader sub(arr[i], at(key) + "[" + std::to_string(i) + "]");
      fn(sub, item);
      sub.finish();
      items.push_back(item);
    }
  }
  void finish() const {
    for (const auto& [k, v] : node_.items()) {
      if (!seen_.count(k)) fail(at(k.c_str()), "unknown key");
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw ValidationError(path + ": " + msg);
  }
  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  bool take(const char* key) {
    if (!node_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }
  void vec(const char* key, double* out, int n) {
    if (!take(key)) return;
    const json& arr = node_.at(key);
    if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
      fail(at(key), "expected an array of " + std::to_string(n) + " numbers");
    }
    for (int i = 0; i < n; ++i) {
      if (!arr[i].is_number()) fail(at(key), "expected numbers");
      out[i] = arr[i].get<double>();
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename V>
void visit(V& v, RunConfig& c) {
  v.field("master_seed", c.master_seed);
  v.field("num_scenarios", c.num_scenarios);
  v.object("scenario", [&](V& s) {
    ScenarioConfig& sc = c.scenario;
    s.list("lanes", sc.lanes, [](V& l, LaneSpec& lane) {
      l.field("id", lane.id);
      l.field("start", lane.start);
      l.field("end", lane.end);
      l.field("width", lane.width);
    });
    s.field("ms_lane", sc.ms_lane);
    s.field("vehicles_per_lane", sc.vehicles_per_lane);
    s.field("speed_min", sc.speed_min);
    s.field("speed_max", sc.speed_max);
    s.field("gap_min", sc.gap_min);
    s.list("buildings", sc.buildings, [](V& b, Cuboid& box) {
      b.field("center", box.center);
      b.field("length", box.length);
      b.field("width", box.width);
      b.field("height", box.height);
      b.angle_deg("azimuth_deg", box.azimuth);
    });
    s.object("coverage", [&](V& r) {
      r.field("x_min", sc.coverage.x_min);
      r.field("x_max", sc.coverage.x_max);
      r.field("y_min", sc.coverage.y_min);
      r.field("y_max", sc.coverage.y_max);
    });
    s.field("rsu_position", sc.rsu_position);
    s.field("ms_start_s", sc.ms_start_s);
    s.field("snapshot_interval", sc.snapshot_interval);
    s.field("horizon", sc.horizon);
    s.field("num_cameras", sc.num_cameras);
    s.field("camera_above_roof", sc.camera_above_roof);
    s.field("antenna_above_roof", sc.antenna_above_roof);
    s.field("image_width", sc.image_width);
    s.field("image_height", sc.image_height);
  });
  v.object("channel", [&](V& s) {
    ChannelConfig& ch = c.channel;
    s.field("carrier_hz", ch.carrier_hz);
    s.field("num_subcarriers", ch.num_subcarriers);
    s.field("subcarrier_spacing_hz", ch.subcarrier_spacing_hz);
    s.field("num_bs_antennas", ch.num_bs_antennas);
    s.field("num_ms_antennas", ch.num_ms_antennas);
    s.field("cyclic_prefix_len", ch.cyclic_prefix_len);
    s.field("max_reflections", ch.max_reflections);
    s.field("max_paths", ch.max_paths);
    s.field("metal_reflection", ch.metal_reflection);
    s.field("concrete_reflection", ch.concrete_reflection);
    s.field("ground_reflection", ch.ground_reflection);
    s.field("subcarrier_power", ch.subcarrier_power);
    s.field("target_snr_db", ch.target_snr_db);
  });
  v.object("features", [&](V& s) {
    FeatureConfig& f = c.features;
    s.field("sequence_length", f.sequence_length);
    s.object("detection_noise", [&](V& n) {
      n.field("center", f.detection_noise.center);
      n.field("size", f.detection_noise.size);
      n.angle_deg("azimuth_deg", f.detection_noise.azimuth);
    });
    s.field("cell_length", f.cell_length);
    s.field("cell_width", f.cell_width);
    s.field("sif_pool_block", f.sif_pool_block);
    s.field("store_sif", f.store_sif);
  });
  v.object("codebook", [&](V& s) {
    s.field("tx_size", c.codebook.tx_size);
    s.field("rx_size", c.codebook.rx_size);
  });
  v.field("split", c.split);
  v.object("vdban", [&](V& s) {
    s.field("model_dim", c.vdban.model_dim);
    s.field("conv_filters", c.vdban.conv_filters);
    s.field("block_dims", c.vdban.block_dims);
    s.field("heads", c.vdban.heads);
    s.field("ffn_hidden", c.vdban.ffn_hidden);
    s.field("head_hidden", c.vdban.head_hidden);
    s.field("azimuth_scale", c.vdban.azimuth_scale);
    s.field("location_scale", c.vdban.location_scale);
  });
  v.object("train", [&](V& s) {
    s.field("epochs", c.train.epochs);
    s.field("batch_size", c.train.batch_size);
    s.field("learning_rate", c.train.adam.learning_rate);
    s.field("beta1", c.train.adam.beta1);
    s.field("beta2", c.train.adam.beta2);
    s.field("epsilon", c.train.adam.epsilon);
  });
  v.object("bct", [&](V& s) {
    s.field("hidden", c.bct.hidden);
    s.field("epochs", c.bct.epochs);
    s.field("batch_size", c.bct.batch_size);
    s.field("learning_rate", c.bct.adam.learning_rate);
    s.field("resample", c.bct_resample);
  });
  v.object("eval", [&](V& s) {
    s.field("top_b", c.eval.top_b);
    s.field("sigma_c", c.eval.sigma_c);
    s.field("m_f", c.eval.m_f);
    s.field("tb_over_td", c.eval.tb_over_td);
    s.field("knn_k", c.eval.knn_k);
    s.field("robustness_b", c.eval.robustness_b);
  });
}

// Runs a module validator and re-labels its message with a config path.
template <typename Fn>
void check(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void RunConfig::validate() const {
  require(num_scenarios >= 1, "num_scenarios: must be >= 1");
  check("scenario", [&] { scenario.validate(); });
  check("channel", [&] { channel.validate(); });
  require(channel.num_bs_antennas >= 1 && channel.num_ms_antennas >= 1,
          "channel: antenna counts must be >= 1");
  require(features.sequence_length >= 1, "features.sequence_length: must be >= 1");
  check("features.detection_noise", [&] { features.detection_noise.validate(); });
  require(features.cell_length > 0.0 && features.cell_width > 0.0,
          "features.cell_length/cell_width: must be positive");
  require(features.sif_pool_block >= 1, "features.sif_pool_block: must be >= 1");
  require(codebook.tx_size >= 1 && codebook.rx_size >= 1, "codebook: sizes must be >= 1");
  double sum = 0.0;
  for (double f : split) {
    require(f >= 0.0, "split: fractions must be nonnegative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "split: fractions must sum to 1 (got " << sum << ")";
    throw ValidationError(msg.str());
  }
  require(split[0] > 0.0, "split: training fraction must be positive");
  {
    VdbanConfig probe = vdban;
    probe.grid_cells = 1;
    probe.num_classes = 1;
    check("vdban", [&] { probe.validate(); });
  }
  check("train", [&] { train.validate(); });
  check("bct", [&] { bct.validate(); });
  for (int b : eval.top_b) require(b >= 1, "eval.top_b: entries must be >= 1");
  for (double s : eval.sigma_c) require(s >= 0.0, "eval.sigma_c: entries must be >= 0");
  for (int m : eval.m_f) require(m >= 1, "eval.m_f: entries must be >= 1");
  for (double t : eval.tb_over_td) {
    require(t >= 0.0 && t < 1.0, "eval.tb_over_td: entries must lie in [0, 1)");
  }
  require(eval.knn_k >= 1, "eval.knn_k: must be >= 1");
  require(eval.robustness_b >= 1, "eval.robustness_b: must be >= 1");
}

RunConfig run_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON (") + e.what() + ")");
  }
  RunConfig c;
  Reader r(j, "");
  visit(r, c);
  r.finish();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

std::string run_config_to_json(const RunConfig& cfg, int indent) {
  RunConfig copy = cfg;
  json j;
  Writer w(j);
  visit(w, copy);
  return j.dump(indent);
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(run_config_to_json(cfg, -1)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace beamlab
