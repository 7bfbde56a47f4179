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

#include "beamlab/beams.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamlab {

double codebook_angle(int i, int n_cb) {
  return (2.0 * i - n_cb) / (2.0 * n_cb) * kPi;
}

Codebook dft_codebook(int n, int n_cb) {
  if (n_cb < 1) throw std::invalid_argument("dft_codebook: n_cb must be >= 1");
  Codebook cb;
  cb.beams.resize(n, n_cb);
  for (int i = 0; i < n_cb; ++i) cb.beams.col(i) = steering_vector(codebook_angle(i, n_cb), n);
  return cb;
}

namespace {

double snr_linear(const ChannelConfig& cfg) { return cfg.subcarrier_power / cfg.noise_power; }

void check_shapes(const ChannelMatrices& h, const Codebook& cb_tx, const Codebook& cb_rx) {
  if (cb_tx.size() < 1 || cb_rx.size() < 1) {
    throw std::invalid_argument("beam sweep: empty codebook");
  }
  for (const auto& hk : h) {
    if (hk.rows() != cb_rx.antennas() || hk.cols() != cb_tx.antennas()) {
      throw std::invalid_argument("beam sweep: channel shape does not match codebooks");
    }
  }
}

}  // namespace

double rate(const ChannelMatrices& h, const Eigen::VectorXcd& w_tx,
            const Eigen::VectorXcd& w_rx, const ChannelConfig& cfg) {
  if (h.empty()) throw std::invalid_argument("rate: no subcarriers");
  const double snr = snr_linear(cfg);
  double sum = 0.0;
  for (const auto& hk : h) {
    if (hk.rows() != w_rx.size() || hk.cols() != w_tx.size()) {
      throw std::invalid_argument("rate: beam length does not match channel");
    }
    cd z = 0.0;
    for (Eigen::Index m = 0; m < hk.rows(); ++m) {
      cd acc = 0.0;
      for (Eigen::Index n = 0; n < hk.cols(); ++n) acc += hk(m, n) * w_tx(n);
      z += std::conj(w_rx(m)) * acc;
    }
    sum += std::log2(1.0 + snr * std::norm(z));
  }
  return sum / static_cast<double>(h.size());
}

std::vector<double> pair_rates(const ChannelMatrices& h, const Codebook& cb_tx,
                               const Codebook& cb_rx, const ChannelConfig& cfg) {
  check_shapes(h, cb_tx, cb_rx);
  if (h.empty()) throw std::invalid_argument("pair_rates: no subcarriers");
  const int n_tx = cb_tx.size();
  const int n_rx = cb_rx.size();
  const int n_u = cb_rx.antennas();
  const int n_b = cb_tx.antennas();
  const double snr = snr_linear(cfg);
  std::vector<double> table(static_cast<std::size_t>(n_tx) * n_rx, 0.0);
  // Plain left-to-right sums, so the table is reproducible by any direct
  // evaluation of w_rx^H (H_k w_tx) in the same order.
  std::vector<cd> hw(static_cast<std::size_t>(n_u));
  for (const auto& hk : h) {
    for (int t = 0; t < n_tx; ++t) {
      for (int m = 0; m < n_u; ++m) {
        cd acc = 0.0;
        for (int n = 0; n < n_b; ++n) acc += hk(m, n) * cb_tx.beams(n, t);
        hw[m] = acc;
      }
      for (int r = 0; r < n_rx; ++r) {
        cd y = 0.0;
        for (int m = 0; m < n_u; ++m) y += std::conj(cb_rx.beams(m, r)) * hw[m];
        table[pair_index(t, r, n_rx)] += std::log2(1.0 + snr * std::norm(y));
      }
    }
  }
  for (double& v : table) v /= static_cast<double>(h.size());
  return table;
}

std::vector<double> pair_rates_from_paths(std::span<const PathParam> paths,
                                          const Codebook& cb_tx, const Codebook& cb_rx,
                                          const ChannelConfig& cfg) {
  const int n_tx = cb_tx.size();
  const int n_rx = cb_rx.size();
  const int n_paths = static_cast<int>(paths.size());
  const int k_count = cfg.num_subcarriers;
  std::vector<double> table(static_cast<std::size_t>(n_tx) * n_rx, 0.0);
  if (n_paths == 0) return table;

  Eigen::MatrixXcd gr(n_rx, n_paths);  // w_rx^H a_r(aoa_l)
  Eigen::MatrixXcd gt(n_paths, n_tx);  // a_t(aod_l)^H w_tx
  for (int l = 0; l < n_paths; ++l) {
    gr.col(l) = cb_rx.beams.adjoint() * steering_vector(paths[l].aoa, cb_rx.antennas());
    gt.row(l) = steering_vector(paths[l].aod, cb_tx.antennas()).adjoint() * cb_tx.beams;
  }
  const double snr = snr_linear(cfg);
  Eigen::MatrixXcd scaled(n_rx, n_paths);
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < n_paths; ++l) {
      const cd c = paths[l].gain *
                   std::polar(1.0, -2.0 * kPi * cfg.subcarrier_offset_hz(k) * paths[l].delay);
      scaled.col(l) = gr.col(l) * c;
    }
    const Eigen::MatrixXcd g = scaled * gt;
    for (int t = 0; t < n_tx; ++t) {
      for (int r = 0; r < n_rx; ++r) {
        table[pair_index(t, r, n_rx)] += std::log2(1.0 + snr * std::norm(g(r, t)));
      }
    }
  }
  for (double& v : table) v /= static_cast<double>(k_count);
  return table;
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax_lowest: empty input");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

SweepResult sweep_optimal(const ChannelMatrices& h, const Codebook& cb_tx,
                          const Codebook& cb_rx, const ChannelConfig& cfg) {
  const std::vector<double> table = pair_rates(h, cb_tx, cb_rx, cfg);
  SweepResult out;
  out.pair = argmax_lowest(table);
  out.rate = table[out.pair];
  return out;
}

BeamPairSet::BeamPairSet(std::vector<int> pairs, int n_tx, int n_rx)
    : pairs_(std::move(pairs)), n_tx_(n_tx), n_rx_(n_rx) {
  if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("BeamPairSet: codebook sizes must be >= 1");
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (int p : pairs_) {
    if (p < 0 || p >= n_tx * n_rx) throw std::invalid_argument("BeamPairSet: pair index out of range");
  }
}

int BeamPairSet::index_of(int full) const {
  const auto it = std::lower_bound(pairs_.begin(), pairs_.end(), full);
  if (it == pairs_.end() || *it != full) return -1;
  return static_cast<int>(it - pairs_.begin());
}

BeamPairSet restrict_pairs(std::span<const int> labels, int n_tx, int n_rx) {
  if (labels.empty()) throw std::invalid_argument("restrict_pairs: no labels");
  return BeamPairSet(std::vector<int>(labels.begin(), labels.end()), n_tx, n_rx);
}

double top_b_rate(std::span<const double> rates, std::span<const int> ranked, int b) {
  if (b < 1) throw std::invalid_argument("top_b_rate: B must be >= 1");
  if (ranked.empty()) throw std::invalid_argument("top_b_rate: empty ranking");
  const int n = std::min<int>(b, static_cast<int>(ranked.size()));
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const int idx = ranked[i];
    if (idx < 0 || idx >= static_cast<int>(rates.size())) {
      throw std::out_of_range("top_b_rate: ranked entry has no rate");
    }
    best = std::max(best, rates[idx]);
  }
  return best;
}

double top_b_rate(const ChannelMatrices& h, std::span<const int> ranked_pairs, int b,
                  const Codebook& cb_tx, const Codebook& cb_rx, const ChannelConfig& cfg) {
  if (b < 1) throw std::invalid_argument("top_b_rate: B must be >= 1");
  if (ranked_pairs.empty()) throw std::invalid_argument("top_b_rate: empty ranking");
  const int n_rx = cb_rx.size();
  const int n = std::min<int>(b, static_cast<int>(ranked_pairs.size()));
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const int p = ranked_pairs[i];
    if (p < 0 || p >= cb_tx.size() * n_rx) throw std::out_of_range("top_b_rate: pair out of range");
    best = std::max(best, rate(h, cb_tx.beams.col(p / n_rx), cb_rx.beams.col(p % n_rx), cfg));
  }
  return best;
}

}  // namespace beamlab
