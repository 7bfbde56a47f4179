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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace beamlab {

/// Beam coherence time M_{q,r} in units of T_d: the length of the run of
/// equal labels starting at snapshot r (1-based), cut at the sequence end.
int label_bct(std::span<const int> beam_labels, int r);

/// label_bct for every r at once, in one backward pass.
std::vector<int> label_bct_all(std::span<const int> beam_labels);

/// Groups {1}, {2}, {3, 4, ...} numbered 1, 2, 3.
int group_bct(int m);

/// BCT the policy uses for a predicted group: the group's smallest member.
int group_min_bct(int group);

/// Whether a BCT value falls in a group.
bool group_contains(int group, int m);

enum class Split : std::uint8_t { kTrain = 0, kValidation = 1, kTest = 2 };

/// Assigns whole scenarios to train / validation / test. Counts are
/// round(f_train Q), round(f_val Q) and the remainder, after a seeded
/// shuffle. Throws if Q is smaller than the number of nonzero fractions or
/// the fractions do not sum to 1.
std::vector<Split> split_dataset(int num_scenarios, const std::array<double, 3>& fractions,
                                 std::uint64_t seed);

/// Indices into `groups` with every group oversampled (with replacement)
/// up to the size of the largest one. Originals come first, in order.
std::vector<int> resample_balanced(std::span<const int> groups, std::uint64_t seed);

}  // namespace beamlab
