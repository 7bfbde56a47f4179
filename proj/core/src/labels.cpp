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

#include "beamlab/labels.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "beamlab/seeds.hpp"

namespace beamlab {

int label_bct(std::span<const int> beam_labels, int r) {
  const int n = static_cast<int>(beam_labels.size());
  if (r < 1 || r > n) throw std::out_of_range("label_bct: r outside 1..S_q");
  int m = 1;
  while (r - 1 + m < n && beam_labels[r - 1 + m] == beam_labels[r - 1]) ++m;
  return m;
}

std::vector<int> label_bct_all(std::span<const int> beam_labels) {
  const int n = static_cast<int>(beam_labels.size());
  std::vector<int> m(n, 1);
  for (int i = n - 2; i >= 0; --i) {
    if (beam_labels[i] == beam_labels[i + 1]) m[i] = m[i + 1] + 1;
  }
  return m;
}

int group_bct(int m) {
  if (m < 1) throw std::invalid_argument("group_bct: BCT must be >= 1");
  return m >= 3 ? 3 : m;
}

int group_min_bct(int group) {
  if (group < 1 || group > 3) throw std::invalid_argument("group_min_bct: group must be 1..3");
  return group;
}

bool group_contains(int group, int m) { return group_bct(m) == group; }

std::vector<Split> split_dataset(int num_scenarios, const std::array<double, 3>& fractions,
                                 std::uint64_t seed) {
  double sum = 0.0;
  int used = 0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw std::invalid_argument("split_dataset: negative fraction");
    sum += f;
    if (f > 0.0) ++used;
  }
  if (num_scenarios < used) {
    throw std::invalid_argument("split_dataset: fewer scenarios than nonempty splits");
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_dataset: fractions must sum to 1");
  }
  const int n_train = static_cast<int>(std::lround(fractions[0] * num_scenarios));
  const int n_val = static_cast<int>(std::lround(fractions[1] * num_scenarios));
  if (n_train + n_val > num_scenarios) {
    throw std::invalid_argument("split_dataset: fractions leave no room for the test split");
  }
  std::vector<int> order(num_scenarios);
  for (int i = 0; i < num_scenarios; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = num_scenarios - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_index(rng, static_cast<std::uint64_t>(i) + 1)]);
  }
  std::vector<Split> out(num_scenarios, Split::kTest);
  for (int i = 0; i < n_train; ++i) out[order[i]] = Split::kTrain;
  for (int i = n_train; i < n_train + n_val; ++i) out[order[i]] = Split::kValidation;
  return out;
}

std::vector<int> resample_balanced(std::span<const int> groups, std::uint64_t seed) {
  std::map<int, std::vector<int>> members;
  for (int i = 0; i < static_cast<int>(groups.size()); ++i) members[groups[i]].push_back(i);
  std::size_t target = 0;
  for (const auto& [g, idx] : members) target = std::max(target, idx.size());
  std::vector<int> out(groups.size());
  for (int i = 0; i < static_cast<int>(groups.size()); ++i) out[i] = i;
  std::mt19937_64 rng(seed);
  for (const auto& [g, idx] : members) {
    for (std::size_t k = idx.size(); k < target; ++k) {
      out.push_back(idx[uniform_index(rng, idx.size())]);
    }
  }
  return out;
}

}  // namespace beamlab
