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

#include "mqt/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

std::vector<int> iota_qubits(int first, int count) {
  std::vector<int> q(count);
  std::iota(q.begin(), q.end(), first);
  return q;
}

void check_features(std::span<const double> x, int d, const char* what) {
  if (static_cast<int>(x.size()) != d) {
    throw DimensionError(fmt::format("{} has {} features, expected {}", what, x.size(), d));
  }
}

// Embed(x_j), Query, Key^dagger, Embed(x_k)^dagger on `qk`, then the MPS
// staircase into `ancilla`.
void apply_query_key(Register& reg, std::span<const int> qk, int ancilla,
                     std::span<const double> xj, std::span<const double> xk,
                     const AttentionParams& p) {
  for (std::size_t q = 0; q < qk.size(); ++q) ry_gate(reg, qk[q], xj[q]);
  strongly_entangling_layer(reg, qk, p.query);
  strongly_entangling_layer_adjoint(reg, qk, p.key);
  for (std::size_t q = 0; q < qk.size(); ++q) ry_gate(reg, qk[q], -xk[q]);
  mps_layer(reg, qk, ancilla, p.mps);
}

void apply_value(Register& reg, std::span<const int> qubits, std::span<const double> xk,
                 const AttentionParams& p) {
  for (std::size_t q = 0; q < qubits.size(); ++q) ry_gate(reg, qubits[q], xk[q]);
  const std::size_t per_layer = AttentionParams::query_size(p.d);
  for (int l = 0; l < kValueLayers; ++l) {
    strongly_entangling_layer(reg, qubits, p.value.subspan(l * per_layer, per_layer));
  }
}

}  // namespace

void AttentionParams::validate() const {
  if (d < 2) throw DimensionError(fmt::format("attention needs d_emb >= 2, got {}", d));
  auto check = [](std::span<const double> s, std::size_t n, const char* name) {
    if (s.size() != n) {
      throw DimensionError(fmt::format("attention {} has {} values, expected {}", name,
                                       s.size(), n));
    }
    for (double v : s) {
      if (!std::isfinite(v)) throw NumericalError(fmt::format("attention {} not finite", name));
    }
  };
  check(query, query_size(d), "query");
  check(key, query_size(d), "key");
  check(value, value_size(d), "value");
  check(mps, mps_size(d), "mps");
}

StateVector angle_embed(std::span<const double> features) {
  const int d = static_cast<int>(features.size());
  std::vector<cplx> amps(std::size_t{1} << d);
  for (std::size_t b = 0; b < amps.size(); ++b) {
    double a = 1.0;
    for (int q = 0; q < d; ++q) {
      const bool one = b & (std::size_t{1} << (d - 1 - q));
      a *= one ? std::sin(features[q] / 2.0) : std::cos(features[q] / 2.0);
    }
    amps[b] = a;
  }
  return StateVector::normalized(std::move(amps));
}

double attention_probability(std::span<const double> xj, std::span<const double> xk,
                             const AttentionParams& p) {
  check_features(xj, p.d, "x_j");
  check_features(xk, p.d, "x_k");
  Register reg(p.d + 1);
  const auto qk = iota_qubits(0, p.d);
  apply_query_key(reg, qk, p.d, xj, xk, p);
  // The ancilla is the least significant bit.
  double p1 = 0.0;
  const auto amps = reg.state().amplitudes();
  for (std::size_t b = 1; b < amps.size(); b += 2) p1 += std::norm(amps[b]);
  return std::clamp(p1, 0.0, 1.0);
}

StateVector value_state(std::span<const double> xk, const AttentionParams& p) {
  check_features(xk, p.d, "x_k");
  Register reg(p.d);
  apply_value(reg, iota_qubits(0, p.d), xk, p);
  return reg.state();
}

namespace {

BranchEnsemble mix_with_value(const BranchEnsemble& psi, double prob, const StateVector& v,
                              int max_branches, double* discarded) {
  Eigen::MatrixXcd rho = (1.0 - prob) * psi.density_matrix();
  Eigen::Map<const Eigen::VectorXcd> vv(v.amplitudes().data(),
                                        static_cast<Eigen::Index>(v.dim()));
  rho.noalias() += prob * vv * vv.adjoint();
  auto res = ensemble_from_density(rho, max_branches);
  if (discarded) *discarded += res.discarded;
  return std::move(res.ensemble);
}

}  // namespace

BranchEnsemble attention_update(const BranchEnsemble& psi, std::span<const double> xj,
                                std::span<const double> xk, const AttentionParams& p,
                                int max_branches, double* discarded) {
  p.validate();
  if (psi.qubits() != p.d) {
    throw DimensionError(fmt::format("ensemble on {} qubits, attention expects {}",
                                     psi.qubits(), p.d));
  }
  const double prob = attention_probability(xj, xk, p);
  return mix_with_value(psi, prob, value_state(xk, p), max_branches, discarded);
}

BranchEnsemble attention_update_full_register(const BranchEnsemble& psi,
                                              std::span<const double> xj,
                                              std::span<const double> xk,
                                              const AttentionParams& p, int max_branches) {
  p.validate();
  check_features(xj, p.d, "x_j");
  check_features(xk, p.d, "x_k");
  if (psi.qubits() != p.d) throw DimensionError("ensemble qubit count mismatch");
  const int d = p.d;
  const int k = 3 * d + 1;
  const auto main = iota_qubits(0, d);
  const auto value = iota_qubits(d, d);
  const auto qk = iota_qubits(2 * d, d);
  const int ancilla = 3 * d;

  const Eigen::Index dim = Eigen::Index{1} << d;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& branch : psi.branches()) {
    std::vector<cplx> amps(std::size_t{1} << k);
    const auto phi = branch.state.amplitudes();
    for (std::size_t i = 0; i < phi.size(); ++i) amps[i << (2 * d + 1)] = phi[i];
    Register reg(StateVector::from_amplitudes(std::move(amps)));

    apply_query_key(reg, qk, ancilla, xj, xk, p);
    apply_value(reg, value, xk, p);
    for (int q = 0; q < d; ++q) cswap(reg, ancilla, main[q], value[q]);

    rho += branch.weight * reduced_density_matrix(reg.state(), main);
  }
  return ensemble_from_density(rho, max_branches).ensemble;
}

std::vector<double> token_block_forward(std::span<const double> tokens, int m,
                                        const AttentionParams& p, int max_branches,
                                        BlockDiagnostics* diag) {
  p.validate();
  const int d = p.d;
  if (m < 1 || tokens.size() != static_cast<std::size_t>(m) * d) {
    throw DimensionError(fmt::format("token block expects {} x {} features, got {}", m, d,
                                     tokens.size()));
  }
  auto row = [&](int j) { return tokens.subspan(static_cast<std::size_t>(j) * d, d); };

  std::vector<StateVector> values;
  values.reserve(m);
  for (int k = 0; k < m; ++k) values.push_back(value_state(row(k), p));

  const auto measured = iota_qubits(0, d);
  std::vector<double> out(static_cast<std::size_t>(m) * d);
  for (int j = 0; j < m; ++j) {
    auto psi = BranchEnsemble::pure(angle_embed(row(j)));
    for (int k = 0; k < m; ++k) {
      const double prob = attention_probability(row(j), row(k), p);
      double dropped = 0.0;
      psi = mix_with_value(psi, prob, values[k], max_branches, &dropped);
      if (diag) {
        diag->discarded_mass += dropped;
        ++diag->updates;
      }
    }
    const auto z = z_expectations(psi, measured);
    std::copy(z.begin(), z.end(), out.begin() + static_cast<std::ptrdiff_t>(j) * d);
  }
  return out;
}

}  // namespace mqt
