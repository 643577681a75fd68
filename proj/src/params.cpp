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

#include "mqt/params.hpp"

#include <cstring>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace mqt {

std::span<double> ParamStore::add(const std::string& name, std::vector<std::size_t> shape,
                                  ParamGroup group, bool decay) {
  if (name.empty()) throw std::invalid_argument("parameter name must not be empty");
  if (contains(name)) throw std::invalid_argument(fmt::format("duplicate parameter {}", name));
  ParamInfo p;
  p.name = name;
  p.size = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  p.shape = std::move(shape);
  p.offset = values_.size();
  p.group = group;
  p.decay = decay;
  values_.resize(values_.size() + p.size, 0.0);
  index_[name] = tensors_.size();
  tensors_.push_back(p);
  return std::span<double>(values_).subspan(p.offset, p.size);
}

const ParamInfo& ParamStore::info(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range(fmt::format("unknown parameter {}", name));
  return tensors_[it->second];
}

std::span<const double> ParamStore::get(const std::string& name) const {
  const auto& p = info(name);
  return std::span<const double>(values_).subspan(p.offset, p.size);
}

std::span<double> ParamStore::get(const std::string& name) {
  const auto& p = info(name);
  return std::span<double>(values_).subspan(p.offset, p.size);
}

std::vector<std::size_t> ParamStore::indices(ParamGroup group) const {
  std::vector<std::size_t> out;
  for (const auto& p : tensors_) {
    if (p.group != group) continue;
    for (std::size_t i = 0; i < p.size; ++i) out.push_back(p.offset + i);
  }
  return out;
}

std::vector<bool> ParamStore::decay_mask() const {
  std::vector<bool> mask(values_.size(), true);
  for (const auto& p : tensors_) {
    for (std::size_t i = 0; i < p.size; ++i) mask[p.offset + i] = p.decay;
  }
  return mask;
}

std::uint64_t ParamStore::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : tensors_) {
    mix(p.name.data(), p.name.size());
    for (auto s : p.shape) {
      const std::uint64_t v = s;
      mix(&v, sizeof v);
    }
    for (std::size_t i = 0; i < p.size; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, &values_[p.offset + i], sizeof bits);
      unsigned char le[8];
      for (int b = 0; b < 8; ++b) le[b] = static_cast<unsigned char>(bits >> (8 * b));
      mix(le, 8);
    }
  }
  return h;
}

}  // namespace mqt
