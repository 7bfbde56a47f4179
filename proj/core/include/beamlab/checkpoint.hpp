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
#include <iosfwd>
#include <string>

#include "beamlab/baselines.hpp"
#include "beamlab/vdban.hpp"

namespace beamlab {

struct CheckpointMeta {
  std::string kind;  // "vdban" or "bct"
  std::uint64_t dataset_hash = 0;
  std::uint64_t pair_set_hash = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int best_epoch = 0;
};

/// File: a magic line, a little-endian u64 metadata length, JSON metadata
/// (kind, hashes, architecture, parameter names and shapes), then every
/// parameter as little-endian float64 in the declared order, column-major.
void save_vdban(std::ostream& out, const VdbanModel& model, const CheckpointMeta& meta);
VdbanModel load_vdban(std::istream& in, CheckpointMeta* meta);

void save_bct(std::ostream& out, const BctClassifier& model, const CheckpointMeta& meta);
BctClassifier load_bct(std::istream& in, CheckpointMeta* meta);

/// Reads only the metadata block.
CheckpointMeta read_checkpoint_meta(std::istream& in);

void save_vdban(const std::string& path, const VdbanModel& model, const CheckpointMeta& meta);
VdbanModel load_vdban(const std::string& path, CheckpointMeta* meta);
void save_bct(const std::string& path, const BctClassifier& model, const CheckpointMeta& meta);
BctClassifier load_bct(const std::string& path, CheckpointMeta* meta);

}  // namespace beamlab
