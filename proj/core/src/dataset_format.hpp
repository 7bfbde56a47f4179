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

// Record layout shared by the dataset reader, writer and hash.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "beamlab/dataset.hpp"

namespace beamlab::detail {

void write_record(std::ostream& out, const DatasetRecord& rec, const DatasetHeader& h);
DatasetRecord read_record(std::istream& in, const DatasetHeader& h);
std::uint64_t records_hash(const std::vector<DatasetRecord>& records, const DatasetHeader& h);

}  // namespace beamlab::detail
