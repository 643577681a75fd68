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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mqt/pauli.hpp"

namespace mqt {

/// Row-major 2x2 complex matrix.
using Gate2 = std::array<cplx, 4>;

Gate2 rz_matrix(double theta);
Gate2 ry_matrix(double theta);
/// Rz(z1) * Ry(y) * Rz(z2); Rz(z2) acts first.
Gate2 rot_matrix(double z1, double y, double z2);
Gate2 adjoint(const Gate2& g);

/// Dense state of k qubits, mutated in place by gates.
class Register {
 public:
  explicit Register(int k) : state_(k) {}
  explicit Register(StateVector s) : state_(std::move(s)) {}

  int qubits() const noexcept { return state_.qubits(); }
  const StateVector& state() const noexcept { return state_; }
  std::span<cplx> amplitudes() noexcept { return state_.mutable_amplitudes(); }

  void apply(int qubit, const Gate2& g);

 private:
  StateVector state_;
};

void rot_gate(Register& reg, int qubit, double z1, double y, double z2);
void ry_gate(Register& reg, int qubit, double theta);
void cnot(Register& reg, int control, int target);
void cswap(Register& reg, int control, int a, int b);

/// Parameters are laid out [qubit][z1, y, z2]. One rotation per qubit, then
/// a CNOT ring q_i -> q_{(i+1) mod n}.
void strongly_entangling_layer(Register& reg, std::span<const int> qubits,
                               std::span<const double> params);
/// Exact inverse of strongly_entangling_layer with the same parameters.
void strongly_entangling_layer_adjoint(Register& reg, std::span<const int> qubits,
                                       std::span<const double> params);

/// Staircase over (q_0,q_1), ..., (q_{d-2},q_{d-1}), (q_{d-1},ancilla). Each
/// block applies Ry on both of its qubits, then CNOT(first -> second).
/// Parameters are laid out [block][first, second], 2*d values.
void mps_layer(Register& reg, std::span<const int> qubits, int ancilla,
               std::span<const double> params);

/// Weighted pure-state decomposition of a mixed state on `qubits` qubits.
struct Branch {
  double weight = 0.0;
  StateVector state;
};

class BranchEnsemble {
 public:
  BranchEnsemble() = default;
  BranchEnsemble(int qubits, std::vector<Branch> branches);

  static BranchEnsemble pure(StateVector s);

  int qubits() const noexcept { return d_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }

  Eigen::MatrixXcd density_matrix() const;

 private:
  int d_ = 0;
  std::vector<Branch> branches_;
};

std::vector<double> z_expectations(const StateVector& state, std::span<const int> qubits);
std::vector<double> z_expectations(const BranchEnsemble& ens, std::span<const int> qubits);

/// Partial trace onto `keep` (keep[0] becomes the most significant qubit).
Eigen::MatrixXcd reduced_density_matrix(const StateVector& state, std::span<const int> keep);

struct TraceResult {
  BranchEnsemble ensemble;
  /// Eigenvalue mass dropped by truncation.
  double discarded = 0.0;
};

/// Eigen-decomposes a density matrix into at most max_branches branches
/// (max_branches <= 0 keeps every eigenvalue above 1e-12).
TraceResult ensemble_from_density(const Eigen::MatrixXcd& rho, int max_branches);

TraceResult trace_to_ensemble(const Register& reg, std::span<const int> keep,
                              int max_branches);

}  // namespace mqt
