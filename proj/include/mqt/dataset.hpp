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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mqt/pauli.hpp"

namespace mqt {

std::uint64_t fnv1a64(std::span<const char> bytes);
std::uint64_t file_checksum(const std::filesystem::path& path);

struct DatasetEntry {
  std::filesystem::path path;
  std::uint64_t checksum = 0;
  QubitHamiltonian hamiltonian;

  double bond_length() const { return hamiltonian.metadata().bond_length_bohr; }
};

/// All mqt-ham-v1 files below a directory, grouped by molecule and sorted by
/// bond length.
class Dataset {
 public:
  /// Recursively loads every *.json file. Throws DataError listing every
  /// unreadable or invalid file, or when the directory holds no files.
  static Dataset load(const std::filesystem::path& dir);

  std::vector<std::string> molecules() const;
  bool has(const std::string& molecule) const { return by_molecule_.count(molecule) > 0; }
  const std::vector<DatasetEntry>& entries(const std::string& molecule) const;

  /// File whose bond length is within `tol` of r.
  const DatasetEntry& exact(const std::string& molecule, double r, double tol = 1e-6) const;

  /// File at the grid point nearest to r on a grid of spacing `step`.
  const DatasetEntry& snapped(const std::string& molecule, double r, double step) const;

  /// (path, checksum) for every loaded file, sorted by path.
  std::vector<std::pair<std::string, std::uint64_t>> checksums() const;

 private:
  std::map<std::string, std::vector<DatasetEntry>> by_molecule_;
};

}  // namespace mqt
