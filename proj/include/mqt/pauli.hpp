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
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mqt {

using cplx = std::complex<double>;

// Qubit 0 is the leftmost character of a Pauli word and the most significant
// bit of an amplitude index.

/// Normalized pure state on k qubits.
class StateVector {
 public:
  StateVector() = default;

  /// |0...0> on k qubits.
  explicit StateVector(int k);

  /// Takes ownership of the amplitudes; throws DimensionError unless the size
  /// is a power of two and the L2 norm is 1 within 1e-9.
  static StateVector from_amplitudes(std::vector<cplx> amps);

  /// Rescales to unit norm. Throws NumericalError on a (near) zero vector.
  static StateVector normalized(std::vector<cplx> amps);

  static StateVector basis(int k, std::uint64_t index);

  int qubits() const noexcept { return k_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> mutable_amplitudes() noexcept { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

 private:
  int k_ = 0;
  std::vector<cplx> amps_;
};

/// Bit masks of a Pauli word: P|b> = i^{ny} (-1)^{|b & z|} |b ^ x>.
struct PauliMask {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int ny = 0;
};

/// Packs a word of IXYZ characters (at most 63). Throws ParseError otherwise.
PauliMask compile_word(std::string_view word);

struct PauliTerm {
  double coefficient = 0.0;
  std::string word;
};

struct NucleusRecord {
  std::string symbol;
  int proton_number = 0;
  std::array<double, 3> xyz_bohr{};
};

struct HamiltonianMetadata {
  std::string molecule;
  std::string basis;
  std::string mapping;
  double bond_length_bohr = 0.0;
  std::string hf_bitstring;
  std::optional<double> reference_energy;
  std::optional<double> hf_energy;
  std::vector<NucleusRecord> nuclei;
  /// Orbital identifiers grouped per nucleus, in nucleus order.
  std::vector<std::vector<int>> electron_ids;
};

/// Real-coefficient Pauli sum on n_q qubits. Immutable after construction.
class QubitHamiltonian {
 public:
  QubitHamiltonian() = default;
  QubitHamiltonian(int n_qubits, std::vector<PauliTerm> terms,
                   HamiltonianMetadata meta = {});

  int qubits() const noexcept { return n_q_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_q_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  const std::vector<PauliMask>& masks() const noexcept { return masks_; }
  const HamiltonianMetadata& metadata() const noexcept { return meta_; }

  /// Amplitude index of the HF bitstring.
  std::uint64_t hf_index() const;

  /// out = H * in over raw (not necessarily normalized) buffers.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

  /// out = Re(H) * in for a real vector. For real input only terms with an
  /// even number of Y factors contribute to the real part.
  void apply_real(std::span<const double> in, std::span<double> out) const;

 private:
  int n_q_ = 0;
  std::vector<PauliTerm> terms_;
  std::vector<PauliMask> masks_;
  HamiltonianMetadata meta_;
};

QubitHamiltonian parse_hamiltonian(const nlohmann::json& doc);
QubitHamiltonian parse_hamiltonian(std::string_view text);
inline QubitHamiltonian parse_hamiltonian(const std::string& text) {
  return parse_hamiltonian(std::string_view(text));
}
inline QubitHamiltonian parse_hamiltonian(const char* text) {
  return parse_hamiltonian(std::string_view(text));
}

StateVector apply_pauli_word(const StateVector& state, std::string_view word);

/// <psi|H|psi>. The imaginary residue is asserted below 1e-10 and dropped.
double expectation(const QubitHamiltonian& h, const StateVector& state);

/// <v|H|v> / <v|v> for a real vector v.
double expectation_real(const QubitHamiltonian& h, std::span<const double> v);

struct LanczosOptions {
  int krylov_dim = 60;
  int max_restarts = 200;
  std::uint64_t seed = 0x6d71745f6c616e63ULL;
};

/// Smallest eigenvalue by restarted Lanczos with full reorthogonalization,
/// converged when the Ritz residual ||Hx - theta x|| <= tol.
/// Throws ConvergenceError carrying the best estimate and its residual.
double ground_energy(const QubitHamiltonian& h, double tol = 1e-9,
                     const LanczosOptions& opts = {});

}  // namespace mqt
