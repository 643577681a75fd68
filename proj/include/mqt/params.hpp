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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mqt {

/// Upstream tensors are differentiated numerically through the full forward
/// pass; downstream tensors analytically.
enum class ParamGroup : std::uint8_t { Upstream = 0, Downstream = 1 };

struct ParamInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
  ParamGroup group = ParamGroup::Upstream;
  bool decay = true;
};

/// Named, shaped parameter tensors backed by one flat buffer. Gradients and
/// optimizer moments use the same flat layout.
class ParamStore {
 public:
  /// Registers a zero-filled tensor. Throws std::invalid_argument when the
  /// name is already taken.
  std::span<double> add(const std::string& name, std::vector<std::size_t> shape,
                        ParamGroup group, bool decay = true);

  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  const ParamInfo& info(const std::string& name) const;
  const std::vector<ParamInfo>& tensors() const noexcept { return tensors_; }

  std::span<const double> get(const std::string& name) const;
  std::span<double> get(const std::string& name);

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Flat indices of every coordinate in `group`, in registration order.
  std::vector<std::size_t> indices(ParamGroup group) const;
  /// Per-coordinate weight-decay mask.
  std::vector<bool> decay_mask() const;

  /// FNV-1a over names, shapes and the raw little-endian values.
  std::uint64_t checksum() const;

 private:
  std::vector<ParamInfo> tensors_;
  std::map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

}  // namespace mqt
