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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "beamlab/channel.hpp"

namespace beamlab {

/// Beam vectors stored as the columns of a matrix.
struct Codebook {
  Eigen::MatrixXcd beams;

  int size() const { return static_cast<int>(beams.cols()); }
  int antennas() const { return static_cast<int>(beams.rows()); }
};

/// Steering angle of beam i (0-based) of an n_cb-entry DFT codebook:
/// ((2i - n_cb) / (2 n_cb)) * pi.
double codebook_angle(int i, int n_cb);

Codebook dft_codebook(int n, int n_cb);

/// Index of a (transmit, receive) pair in the full set W_P.
inline int pair_index(int tx, int rx, int n_rx) { return tx * n_rx + rx; }

/// (1/K) sum_k log2(1 + (P_k / sigma^2) |w_rx^H H_k w_tx|^2), bits/s/Hz.
/// Inner products are summed left to right; pair_rates uses the same order,
/// so both give bitwise equal rates.
double rate(const ChannelMatrices& h, const Eigen::VectorXcd& w_tx,
            const Eigen::VectorXcd& w_rx, const ChannelConfig& cfg);

struct SweepResult {
  int pair = 0;
  double rate = 0.0;
};

/// Rates of every pair of W_P from channel matrices, indexed by pair_index.
std::vector<double> pair_rates(const ChannelMatrices& h, const Codebook& cb_tx,
                               const Codebook& cb_rx, const ChannelConfig& cfg);

/// Same table computed from the path list. Each path contributes a rank-one
/// term, so beam responses factor into per-path receive and transmit gains.
std::vector<double> pair_rates_from_paths(std::span<const PathParam> paths,
                                          const Codebook& cb_tx, const Codebook& cb_rx,
                                          const ChannelConfig& cfg);

/// Lowest index attaining the maximum.
int argmax_lowest(std::span<const double> values);

/// Exhaustive search over all pairs; ties go to the lowest pair index.
SweepResult sweep_optimal(const ChannelMatrices& h, const Codebook& cb_tx,
                          const Codebook& cb_rx, const ChannelConfig& cfg);

/// Sorted, duplicate-free subset of W_P.
class BeamPairSet {
 public:
  BeamPairSet() = default;
  BeamPairSet(std::vector<int> pairs, int n_tx, int n_rx);

  int size() const { return static_cast<int>(pairs_.size()); }
  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  int full_index(int i) const { return pairs_.at(i); }
  int tx(int i) const { return pairs_.at(i) / n_rx_; }
  int rx(int i) const { return pairs_.at(i) % n_rx_; }
  /// Position of a full-set pair index, or -1 when absent.
  int index_of(int full) const;
  const std::vector<int>& pairs() const { return pairs_; }

  bool operator==(const BeamPairSet&) const = default;

 private:
  std::vector<int> pairs_;
  int n_tx_ = 0;
  int n_rx_ = 0;
};

/// The distinct optimal pairs observed in a dataset. Throws on empty input.
BeamPairSet restrict_pairs(std::span<const int> labels, int n_tx, int n_rx);

/// Best rate among the first B entries of a ranking, looked up in a rate
/// table indexed like the ranking. B beyond the ranking uses all of it.
/// Throws std::out_of_range if a ranked entry has no rate.
double top_b_rate(std::span<const double> rates, std::span<const int> ranked, int b);

/// Same, evaluating the rates of full-set pair indices from channel matrices.
double top_b_rate(const ChannelMatrices& h, std::span<const int> ranked_pairs, int b,
                  const Codebook& cb_tx, const Codebook& cb_rx, const ChannelConfig& cfg);

}  // namespace beamlab
