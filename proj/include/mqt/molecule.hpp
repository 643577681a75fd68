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

#include <array>
#include <string>
#include <vector>

#include "mqt/pauli.hpp"

namespace mqt {

using Vec3 = std::array<double, 3>;

struct NucleusSpec {
  std::string symbol;
  int proton_number = 1;
  /// Position at unit bond length; positions scale linearly with r.
  Vec3 unit_position{};
  /// Orbital identifiers of the electrons assigned to this nucleus.
  std::vector<int> electron_ids;
};

/// Molecule with a bond-length-parameterized linear geometry.
class MoleculeSpec {
 public:
  MoleculeSpec() = default;
  MoleculeSpec(std::string name, std::vector<NucleusSpec> nuclei, int n_qubits = 0,
               std::string basis = {}, std::string mapping = {});

  /// H2, LiH, BeH2 and H4 with the default electron-identifier tables.
  static MoleculeSpec builtin(const std::string& name);
  /// Geometry and identifiers from a dataset file, scaled by its bond length.
  static MoleculeSpec from_dataset(const QubitHamiltonian& h);

  const std::string& name() const noexcept { return name_; }
  const std::vector<NucleusSpec>& nuclei() const noexcept { return nuclei_; }
  int electrons() const noexcept { return static_cast<int>(electron_atom_.size()); }
  int nucleus_count() const noexcept { return static_cast<int>(nuclei_.size()); }
  int qubits() const noexcept { return n_qubits_; }
  const std::string& basis() const noexcept { return basis_; }
  const std::string& mapping() const noexcept { return mapping_; }

  /// Nucleus index owning each electron, electron order.
  const std::vector<int>& electron_atoms() const noexcept { return electron_atom_; }
  /// Orbital identifier of each electron, electron order.
  const std::vector<int>& electron_ids() const noexcept { return electron_id_; }
  int max_electron_id() const;
  std::vector<double> proton_numbers() const;

  /// Nuclear coordinates in Bohr; r must lie in (0, 5].
  std::vector<Vec3> positions(double r) const;

  /// Throws DataError when the file disagrees with this molecule's geometry,
  /// proton numbers, identifiers or qubit count.
  void check_consistent(const QubitHamiltonian& h) const;

 private:
  std::string name_;
  std::vector<NucleusSpec> nuclei_;
  int n_qubits_ = 0;
  std::string basis_;
  std::string mapping_;
  std::vector<int> electron_atom_;
  std::vector<int> electron_id_;
};

}  // namespace mqt
