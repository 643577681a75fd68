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

#include <span>
#include <vector>

#include "mqt/simkit.hpp"

namespace mqt {

inline constexpr int kValueLayers = 6;

/// Non-owning view of one attention block's circuit parameters for a
/// d-qubit token register.
///
///   query, key: one strongly entangling layer, d x 3
///   value:      kValueLayers strongly entangling layers, 6 x d x 3
///   mps:        d staircase blocks of two Ry angles, d x 2
struct AttentionParams {
  int d = 0;
  std::span<const double> query;
  std::span<const double> key;
  std::span<const double> value;
  std::span<const double> mps;

  static std::size_t query_size(int d) { return 3 * static_cast<std::size_t>(d); }
  static std::size_t value_size(int d) { return kValueLayers * query_size(d); }
  static std::size_t mps_size(int d) { return 2 * static_cast<std::size_t>(d); }

  /// Throws DimensionError on any shape mismatch or NumericalError on
  /// non-finite values.
  void validate() const;
};

/// Product state of Ry(f_q)|0> over the d = features.size() qubits.
StateVector angle_embed(std::span<const double> features);

/// Probability that the attention ancilla reads 1 after
/// Embed(x_j), Query, Key^dagger, Embed(x_k)^dagger and the MPS staircase.
double attention_probability(std::span<const double> xj, std::span<const double> xk,
                             const AttentionParams& p);

/// Embed(x_k) followed by the Value ansatz, on d qubits.
StateVector value_state(std::span<const double> xk, const AttentionParams& p);

/// One self-attention update of the token register.
///
/// The main register is untouched until the controlled SWAP, so the register
/// factorizes as |phi>|v>|a> and tracing out the auxiliaries yields
///   rho' = (1 - p) rho + p |v><v|
/// with p the ancilla's |1> probability. The result is re-decomposed and
/// truncated to max_branches (<= 0 disables truncation).
BranchEnsemble attention_update(const BranchEnsemble& psi, std::span<const double> xj,
                                std::span<const double> xk, const AttentionParams& p,
                                int max_branches, double* discarded = nullptr);

/// Reference route: simulates the whole [main | value-aux | qk-aux | ancilla]
/// register of 3d+1 qubits per input branch and traces once at the end.
BranchEnsemble attention_update_full_register(const BranchEnsemble& psi,
                                              std::span<const double> xj,
                                              std::span<const double> xk,
                                              const AttentionParams& p, int max_branches);

struct BlockDiagnostics {
  double discarded_mass = 0.0;
  int updates = 0;
};

/// tokens is m x d row-major, already squashed into [0, pi]. Returns m x d
/// Z expectations: row j is measured from psi_{j,m}, which starts as
/// angle_embed(x_j) and is updated against x_1 .. x_m in order.
std::vector<double> token_block_forward(std::span<const double> tokens, int m,
                                        const AttentionParams& p, int max_branches,
                                        BlockDiagnostics* diag = nullptr);

}  // namespace mqt
