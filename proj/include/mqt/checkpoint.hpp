// Copyright 2026 The MQT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mqt/params.hpp"
#include "mqt/train.hpp"

namespace mqt {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout, all integers and floats little-endian:
///
///   "MQTCKPT\0"  u32 version
///   u32 count, then count x (str key, str value)            metadata
///   u32 count, then count x (str name, u8 group, u8 decay,
///                            u32 rank, rank x u64 dim, f64 values)  tensors
///   u32 count, then count x (str name, u64 n, n x f64)      extra arrays
///
/// where str is u32 length followed by the bytes.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  ParamStore params;
  std::map<std::string, std::vector<double>> arrays;
};

/// Writes `path` via a temporary file and rename, plus `path`.txt with a
/// human-readable summary.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
/// Throws ParseError on a bad magic, unknown version or truncated file.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Parameters, optimizer moments, iteration and RNG state.
Checkpoint checkpoint_from_state(const TrainState& state,
                                 std::map<std::string, std::string> metadata = {});
TrainState state_from_checkpoint(const Checkpoint& ckpt);

}  // namespace mqt
