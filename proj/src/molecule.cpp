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

#include "mqt/molecule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

MoleculeSpec::MoleculeSpec(std::string name, std::vector<NucleusSpec> nuclei, int n_qubits,
                           std::string basis, std::string mapping)
    : name_(std::move(name)),
      nuclei_(std::move(nuclei)),
      n_qubits_(n_qubits),
      basis_(std::move(basis)),
      mapping_(std::move(mapping)) {
  if (nuclei_.empty()) throw DimensionError("molecule needs at least one nucleus");
  for (std::size_t a = 0; a < nuclei_.size(); ++a) {
    if (nuclei_[a].proton_number < 1) throw DimensionError("proton number must be positive");
    for (int id : nuclei_[a].electron_ids) {
      if (id < 1) throw DimensionError("electron identifiers start at 1");
      electron_atom_.push_back(static_cast<int>(a));
      electron_id_.push_back(id);
    }
  }
  if (electron_atom_.empty()) throw DimensionError("molecule needs at least one electron");
}

MoleculeSpec MoleculeSpec::builtin(const std::string& name) {
  if (name == "H2") {
    return MoleculeSpec("H2",
                        {{"H", 1, {0.0, 0.0, -0.5}, {1}}, {"H", 1, {0.0, 0.0, 0.5}, {1}}}, 8,
                        "6-31G", "bravyi-kitaev");
  }
  if (name == "LiH") {
    return MoleculeSpec("LiH",
                        {{"Li", 3, {0.0, 0.0, 0.0}, {1, 2, 3}}, {"H", 1, {0.0, 0.0, 1.0}, {1}}},
                        12, "STO-3G", "bravyi-kitaev");
  }
  if (name == "BeH2") {
    return MoleculeSpec("BeH2",
                        {{"H", 1, {0.0, 0.0, -1.0}, {1}},
                         {"Be", 4, {0.0, 0.0, 0.0}, {1, 2, 3, 4}},
                         {"H", 1, {0.0, 0.0, 1.0}, {1}}},
                        14, "STO-3G", "bravyi-kitaev");
  }
  if (name == "H4") {
    // Linear chain, uniform spacing r along z.
    return MoleculeSpec("H4",
                        {{"H", 1, {0.0, 0.0, -1.5}, {1}},
                         {"H", 1, {0.0, 0.0, -0.5}, {1}},
                         {"H", 1, {0.0, 0.0, 0.5}, {1}},
                         {"H", 1, {0.0, 0.0, 1.5}, {1}}},
                        8, "STO-3G", "jordan-wigner");
  }
  throw DataError(fmt::format("no built-in molecule named {}", name));
}

MoleculeSpec MoleculeSpec::from_dataset(const QubitHamiltonian& h) {
  const auto& meta = h.metadata();
  if (meta.nuclei.empty()) {
    throw DataError(fmt::format("{}: dataset file carries no nuclei", meta.molecule));
  }
  if (meta.electron_ids.size() != meta.nuclei.size()) {
    throw DataError(fmt::format("{}: electron_ids must have one group per nucleus",
                                meta.molecule));
  }
  if (!(meta.bond_length_bohr > 0.0)) throw DataError("dataset file has no bond length");
  std::vector<NucleusSpec> nuclei;
  for (std::size_t a = 0; a < meta.nuclei.size(); ++a) {
    const auto& n = meta.nuclei[a];
    NucleusSpec spec{n.symbol, n.proton_number, {}, meta.electron_ids[a]};
    for (int c = 0; c < 3; ++c) spec.unit_position[c] = n.xyz_bohr[c] / meta.bond_length_bohr;
    nuclei.push_back(std::move(spec));
  }
  return MoleculeSpec(meta.molecule, std::move(nuclei), h.qubits(), meta.basis, meta.mapping);
}

int MoleculeSpec::max_electron_id() const {
  return *std::max_element(electron_id_.begin(), electron_id_.end());
}

std::vector<double> MoleculeSpec::proton_numbers() const {
  std::vector<double> z;
  for (const auto& n : nuclei_) z.push_back(n.proton_number);
  return z;
}

std::vector<Vec3> MoleculeSpec::positions(double r) const {
  if (!(r > 0.0) || r > 5.0 + 1e-12) {
    throw DimensionError(fmt::format("bond length {} outside (0, 5] Bohr", r));
  }
  std::vector<Vec3> out;
  for (const auto& n : nuclei_) {
    out.push_back({n.unit_position[0] * r, n.unit_position[1] * r, n.unit_position[2] * r});
  }
  return out;
}

void MoleculeSpec::check_consistent(const QubitHamiltonian& h) const {
  const auto& meta = h.metadata();
  const std::string where = fmt::format("{} r={}", meta.molecule, meta.bond_length_bohr);
  if (n_qubits_ != 0 && h.qubits() != n_qubits_) {
    throw DataError(fmt::format("{}: {} qubits, molecule {} expects {}", where, h.qubits(),
                                name_, n_qubits_));
  }
  if (meta.nuclei.empty()) return;
  if (meta.nuclei.size() != nuclei_.size()) {
    throw DataError(fmt::format("{}: nucleus count differs from molecule {}", where, name_));
  }
  const auto pos = positions(meta.bond_length_bohr);
  for (std::size_t a = 0; a < nuclei_.size(); ++a) {
    const auto& n = meta.nuclei[a];
    if (n.proton_number != nuclei_[a].proton_number) {
      throw DataError(fmt::format("{}: nucleus {} proton number mismatch", where, a));
    }
    for (int c = 0; c < 3; ++c) {
      if (std::abs(n.xyz_bohr[c] - pos[a][c]) > 1e-6) {
        throw DataError(fmt::format("{}: nucleus {} position differs from geometry", where, a));
      }
    }
    if (a < meta.electron_ids.size() && meta.electron_ids[a] != nuclei_[a].electron_ids) {
      throw DataError(fmt::format("{}: nucleus {} electron identifiers differ", where, a));
    }
  }
}

}  // namespace mqt
