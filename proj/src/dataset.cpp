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

#include "mqt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::uint64_t file_checksum(const fs::path& path) {
  const std::string bytes = read_file(path);
  return fnv1a64(bytes);
}

Dataset Dataset::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError(fmt::format("dataset directory {} does not exist", dir.string()));
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DataError(fmt::format("no dataset files (*.json) found in {}", dir.string()));
  }

  Dataset ds;
  std::vector<std::string> problems;
  for (const auto& path : files) {
    try {
      const std::string text = read_file(path);
      DatasetEntry entry{path, fnv1a64(text), parse_hamiltonian(text)};
      const auto& meta = entry.hamiltonian.metadata();
      if (meta.molecule.empty()) throw ParseError("molecule", "missing required field");
      if (meta.bond_length_bohr <= 0.0) {
        throw ParseError("bond_length_bohr", "missing required field");
      }
      ds.by_molecule_[meta.molecule].push_back(std::move(entry));
    } catch (const std::exception& e) {
      problems.push_back(fmt::format("{}: {}", path.string(), e.what()));
    }
  }
  if (!problems.empty()) {
    std::string msg = fmt::format("{} invalid dataset file(s):", problems.size());
    for (const auto& p : problems) msg += "\n  " + p;
    throw DataError(msg);
  }
  for (auto& [mol, entries] : ds.by_molecule_) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.bond_length() < b.bond_length();
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (std::abs(entries[i].bond_length() - entries[i - 1].bond_length()) < 1e-9) {
        throw DataError(fmt::format("duplicate {} files at r={}: {} and {}", mol,
                                    entries[i].bond_length(), entries[i - 1].path.string(),
                                    entries[i].path.string()));
      }
      if (entries[i].hamiltonian.qubits() != entries[0].hamiltonian.qubits()) {
        throw DataError(fmt::format("{}: inconsistent qubit counts across files", mol));
      }
    }
  }
  return ds;
}

std::vector<std::string> Dataset::molecules() const {
  std::vector<std::string> out;
  for (const auto& [mol, _] : by_molecule_) out.push_back(mol);
  return out;
}

const std::vector<DatasetEntry>& Dataset::entries(const std::string& molecule) const {
  auto it = by_molecule_.find(molecule);
  if (it == by_molecule_.end()) {
    throw DataError(fmt::format("dataset has no files for molecule {}", molecule));
  }
  return it->second;
}

const DatasetEntry& Dataset::exact(const std::string& molecule, double r, double tol) const {
  const auto& es = entries(molecule);
  auto it = std::lower_bound(es.begin(), es.end(), r - tol,
                             [](const DatasetEntry& e, double v) { return e.bond_length() < v; });
  if (it == es.end() || std::abs(it->bond_length() - r) > tol) {
    throw DataError(fmt::format("missing dataset coverage: no {} file at r={:.6g} Bohr",
                                molecule, r));
  }
  return *it;
}

const DatasetEntry& Dataset::snapped(const std::string& molecule, double r, double step) const {
  if (!(step > 0.0)) throw DataError("snap step must be positive");
  const double grid = std::max(step, std::round(r / step) * step);
  return exact(molecule, grid, 1e-6);
}

std::vector<std::pair<std::string, std::uint64_t>> Dataset::checksums() const {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& [_, entries] : by_molecule_) {
    for (const auto& e : entries) out.emplace_back(e.path.string(), e.checksum);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mqt
