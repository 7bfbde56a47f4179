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
#include <random>
#include <span>
#include <string_view>

namespace beamlab {

std::uint64_t splitmix64(std::uint64_t x);

/// Pipeline stages that draw random numbers. Each stage gets its own
/// stream so it can be rerun alone.
enum class SeedStage : std::uint64_t {
  kScenario = 1,
  kDetection = 2,
  kSplit = 3,
  kResample = 4,
  kTrain = 5,
  kRobustness = 6,
  kBctTrain = 7,
};

/// Sub-seed for (stage, a, b): the master seed is folded with each counter
/// in turn through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, SeedStage stage, std::uint64_t a = 0,
                          std::uint64_t b = 0);

/// 64-bit FNV-1a, fed incrementally.
class Fnv1a {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  template <typename T>
  void update_value(const T& v) {
    update(std::as_bytes(std::span<const T>(&v, 1)));
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::string_view text);

/// Uniform integer in [0, n) by rejection sampling; unlike the standard
/// distributions its output is the same with every standard library.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

}  // namespace beamlab
