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

#include "mqt/simkit.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

Gate2 matmul(const Gate2& a, const Gate2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

void check_qubit(const Register& reg, int q) {
  if (q < 0 || q >= reg.qubits()) {
    throw DimensionError(fmt::format("qubit {} out of range for {}-qubit register", q,
                                     reg.qubits()));
  }
}

inline std::size_t bit_of(int k, int q) { return std::size_t{1} << (k - 1 - q); }

}  // namespace

Gate2 rz_matrix(double theta) {
  const cplx e = std::polar(1.0, -theta / 2.0);
  return {e, 0.0, 0.0, std::conj(e)};
}

Gate2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

Gate2 rot_matrix(double z1, double y, double z2) {
  return matmul(rz_matrix(z1), matmul(ry_matrix(y), rz_matrix(z2)));
}

Gate2 adjoint(const Gate2& g) {
  return {std::conj(g[0]), std::conj(g[2]), std::conj(g[1]), std::conj(g[3])};
}

void Register::apply(int qubit, const Gate2& g) {
  check_qubit(*this, qubit);
  auto amps = amplitudes();
  const std::size_t bit = bit_of(qubits(), qubit);
  for (std::size_t b = 0; b < amps.size(); ++b) {
    if (b & bit) continue;
    const cplx a0 = amps[b], a1 = amps[b | bit];
    amps[b] = g[0] * a0 + g[1] * a1;
    amps[b | bit] = g[2] * a0 + g[3] * a1;
  }
}

void rot_gate(Register& reg, int qubit, double z1, double y, double z2) {
  reg.apply(qubit, rot_matrix(z1, y, z2));
}

void ry_gate(Register& reg, int qubit, double theta) { reg.apply(qubit, ry_matrix(theta)); }

void cnot(Register& reg, int control, int target) {
  check_qubit(reg, control);
  check_qubit(reg, target);
  if (control == target) throw DimensionError("cnot: control equals target");
  const std::size_t cb = bit_of(reg.qubits(), control), tb = bit_of(reg.qubits(), target);
  auto amps = reg.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    if ((b & cb) && !(b & tb)) std::swap(amps[b], amps[b | tb]);
  }
}

void cswap(Register& reg, int control, int a, int b) {
  check_qubit(reg, control);
  check_qubit(reg, a);
  check_qubit(reg, b);
  if (control == a || control == b || a == b) throw DimensionError("cswap: index collision");
  const int k = reg.qubits();
  const std::size_t cb = bit_of(k, control), ab = bit_of(k, a), bb = bit_of(k, b);
  auto amps = reg.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    // Visit each |..1..0..> once and swap with |..0..1..>.
    if ((i & cb) && (i & ab) && !(i & bb)) std::swap(amps[i], amps[(i & ~ab) | bb]);
  }
}

void strongly_entangling_layer(Register& reg, std::span<const int> qubits,
                               std::span<const double> params) {
  const std::size_t n = qubits.size();
  if (n < 2) throw DimensionError("strongly entangling layer needs at least 2 qubits");
  if (params.size() != 3 * n) {
    throw DimensionError(fmt::format("strongly entangling layer expects {} parameters, got {}",
                                     3 * n, params.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    rot_gate(reg, qubits[i], params[3 * i], params[3 * i + 1], params[3 * i + 2]);
  }
  for (std::size_t i = 0; i < n; ++i) cnot(reg, qubits[i], qubits[(i + 1) % n]);
}

void strongly_entangling_layer_adjoint(Register& reg, std::span<const int> qubits,
                                       std::span<const double> params) {
  const std::size_t n = qubits.size();
  if (n < 2) throw DimensionError("strongly entangling layer needs at least 2 qubits");
  if (params.size() != 3 * n) {
    throw DimensionError(fmt::format("strongly entangling layer expects {} parameters, got {}",
                                     3 * n, params.size()));
  }
  for (std::size_t i = n; i-- > 0;) cnot(reg, qubits[i], qubits[(i + 1) % n]);
  for (std::size_t i = 0; i < n; ++i) {
    reg.apply(qubits[i],
              adjoint(rot_matrix(params[3 * i], params[3 * i + 1], params[3 * i + 2])));
  }
}

void mps_layer(Register& reg, std::span<const int> qubits, int ancilla,
               std::span<const double> params) {
  const std::size_t n = qubits.size();
  if (n < 1) throw DimensionError("mps layer needs at least one data qubit");
  for (int q : qubits) {
    if (q == ancilla) throw DimensionError("mps layer: ancilla overlaps data qubits");
  }
  if (params.size() != 2 * n) {
    throw DimensionError(
        fmt::format("mps layer expects {} parameters, got {}", 2 * n, params.size()));
  }
  for (std::size_t b = 0; b < n; ++b) {
    const int first = qubits[b];
    const int second = b + 1 < n ? qubits[b + 1] : ancilla;
    ry_gate(reg, first, params[2 * b]);
    ry_gate(reg, second, params[2 * b + 1]);
    cnot(reg, first, second);
  }
}

// ---------------------------------------------------------------------------
// Ensembles

BranchEnsemble::BranchEnsemble(int qubits, std::vector<Branch> branches)
    : d_(qubits), branches_(std::move(branches)) {
  if (branches_.empty()) throw DimensionError("ensemble needs at least one branch");
  double total = 0.0;
  for (const auto& b : branches_) {
    if (b.state.qubits() != d_) throw DimensionError("branch qubit count mismatch");
    if (!(b.weight > 0.0)) throw NumericalError("branch weight must be positive");
    if (std::abs(b.state.norm() - 1.0) > 1e-9) throw NumericalError("branch not unit norm");
    total += b.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw NumericalError(fmt::format("ensemble weights sum to {}", total));
  }
}

BranchEnsemble BranchEnsemble::pure(StateVector s) {
  const int d = s.qubits();
  return BranchEnsemble(d, {Branch{1.0, std::move(s)}});
}

Eigen::MatrixXcd BranchEnsemble::density_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << d_;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& b : branches_) {
    Eigen::Map<const Eigen::VectorXcd> v(b.state.amplitudes().data(), dim);
    rho.noalias() += b.weight * v * v.adjoint();
  }
  return rho;
}

std::vector<double> z_expectations(const StateVector& state, std::span<const int> qubits) {
  const int k = state.qubits();
  std::vector<double> out;
  out.reserve(qubits.size());
  const auto amps = state.amplitudes();
  for (int q : qubits) {
    if (q < 0 || q >= k) throw DimensionError(fmt::format("qubit {} out of range", q));
    const std::size_t bit = bit_of(k, q);
    double z = 0.0;
    for (std::size_t b = 0; b < amps.size(); ++b) {
      z += (b & bit) ? -std::norm(amps[b]) : std::norm(amps[b]);
    }
    out.push_back(z);
  }
  return out;
}

std::vector<double> z_expectations(const BranchEnsemble& ens, std::span<const int> qubits) {
  std::vector<double> out(qubits.size(), 0.0);
  for (const auto& b : ens.branches()) {
    const auto z = z_expectations(b.state, qubits);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.weight * z[i];
  }
  return out;
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector& state, std::span<const int> keep) {
  const int k = state.qubits();
  if (keep.empty()) throw DimensionError("partial trace keeps no qubits");
  std::vector<bool> kept(k, false);
  for (int q : keep) {
    if (q < 0 || q >= k) throw DimensionError(fmt::format("qubit {} out of range", q));
    if (kept[q]) throw DimensionError("partial trace: repeated qubit");
    kept[q] = true;
  }
  std::vector<int> rest;
  for (int q = 0; q < k; ++q) {
    if (!kept[q]) rest.push_back(q);
  }
  const Eigen::Index nk = Eigen::Index{1} << keep.size();
  const Eigen::Index nr = Eigen::Index{1} << rest.size();
  Eigen::MatrixXcd m(nk, nr);
  const auto amps = state.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    Eigen::Index ik = 0, ir = 0;
    for (int q : keep) ik = (ik << 1) | ((b & bit_of(k, q)) ? 1 : 0);
    for (int q : rest) ir = (ir << 1) | ((b & bit_of(k, q)) ? 1 : 0);
    m(ik, ir) = amps[b];
  }
  return m * m.adjoint();
}

TraceResult ensemble_from_density(const Eigen::MatrixXcd& rho, int max_branches) {
  const Eigen::Index dim = rho.rows();
  if (dim != rho.cols() || dim == 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("density matrix must be square with power-of-two size");
  }
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw NumericalError(fmt::format("reduced density matrix not Hermitian ({:.3e})", asym));
  }
  const int d = std::countr_zero(static_cast<std::size_t>(dim));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();

  std::vector<Branch> branches;
  double kept = 0.0, discarded = 0.0;
  for (Eigen::Index i = dim; i-- > 0;) {
    const double w = evals[i];
    if (w <= 1e-12) break;
    if (max_branches > 0 && static_cast<int>(branches.size()) >= max_branches) {
      discarded += w;
      continue;
    }
    std::vector<cplx> amps(evecs.col(i).data(), evecs.col(i).data() + dim);
    branches.push_back(Branch{w, StateVector::normalized(std::move(amps))});
    kept += w;
  }
  if (branches.empty()) throw NumericalError("density matrix has no positive eigenvalue");
  for (auto& b : branches) b.weight /= kept;
  return TraceResult{BranchEnsemble(d, std::move(branches)), discarded};
}

TraceResult trace_to_ensemble(const Register& reg, std::span<const int> keep,
                              int max_branches) {
  return ensemble_from_density(reduced_density_matrix(reg.state(), keep), max_branches);
}

}  // namespace mqt
