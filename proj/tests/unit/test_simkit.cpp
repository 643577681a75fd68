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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "mqt/errors.hpp"
#include "mqt/simkit.hpp"
#include "support/oracles.hpp"

using namespace mqt;

namespace {

constexpr double kPi = std::numbers::pi;

// |<a|b>| = 1, i.e. equal up to a global phase.
bool same_ray(const StateVector& a, const StateVector& b, double tol = 1e-12) {
  cplx overlap = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::abs(std::abs(overlap) - 1.0) < tol;
}

double max_diff(const oracle::Vec& a, std::span<const cplx> b) {
  double m = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<int> range(int first, int n) {
  std::vector<int> q(n);
  std::iota(q.begin(), q.end(), first);
  return q;
}

}  // namespace

TEST_CASE("rot gate examples") {
  Register reg(1);
  rot_gate(reg, 0, 0.0, kPi, 0.0);
  CHECK(same_ray(reg.state(), StateVector::basis(1, 1)));

  std::mt19937_64 rng(1);
  auto psi = oracle::random_state(rng, 2);
  Register id(psi);
  rot_gate(id, 1, 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(id.state()[i] - psi[i]) < 1e-15);

  CHECK_THROWS_AS(rot_gate(id, 2, 0, 0, 0), DimensionError);
}

TEST_CASE("rot matrix is unitary and matches Rz Ry Rz") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    auto a = oracle::random_vector(rng, 3, -kPi, kPi);
    const Gate2 g = rot_matrix(a[0], a[1], a[2]);
    oracle::Mat m(2, 2);
    m << g[0], g[1], g[2], g[3];
    CHECK((m.adjoint() * m - oracle::Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK((m - oracle::rot(a[0], a[1], a[2])).norm() < 1e-12);
  }
}

TEST_CASE("ry gate examples") {
  Register a(1);
  ry_gate(a, 0, kPi / 2);
  CHECK(std::abs(a.state()[0] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a.state()[1] - 1 / std::sqrt(2.0)) < 1e-15);

  Register b(1);
  ry_gate(b, 0, 0.0);
  CHECK(b.state()[0] == cplx(1, 0));

  Register c(StateVector::basis(1, 1));
  ry_gate(c, 0, kPi);
  CHECK(std::abs(c.state()[0] - cplx(-1, 0)) < 1e-15);
  CHECK(std::abs(c.state()[1]) < 1e-15);
}

TEST_CASE("cnot and cswap truth tables") {
  Register r(StateVector::basis(2, 0b10));
  cnot(r, 0, 1);
  CHECK(r.state()[0b11] == cplx(1, 0));

  Register s(StateVector::basis(3, 0b101));
  cswap(s, 0, 1, 2);
  CHECK(s.state()[0b110] == cplx(1, 0));

  Register t(StateVector::basis(3, 0b001));
  cswap(t, 0, 1, 2);
  CHECK(t.state()[0b001] == cplx(1, 0));

  CHECK_THROWS_AS(cnot(r, 1, 1), DimensionError);
  CHECK_THROWS_AS(cswap(s, 0, 0, 2), DimensionError);
  CHECK_THROWS_AS(cswap(s, 0, 1, 1), DimensionError);
}

TEST_CASE("cnot and cswap equal their permutation matrices") {
  std::mt19937_64 rng(3);
  const int k = 4;
  auto psi = oracle::random_state(rng, k);
  for (int c = 0; c < k; ++c) {
    for (int t = 0; t < k; ++t) {
      if (c == t) continue;
      Register r(psi);
      cnot(r, c, t);
      CHECK(max_diff(oracle::cnot(k, c, t) * oracle::to_vec(psi.amplitudes()),
                     r.state().amplitudes()) < 1e-15);
    }
  }
  Register r(psi);
  cswap(r, 3, 0, 2);
  CHECK(max_diff(oracle::cswap(k, 3, 0, 2) * oracle::to_vec(psi.amplitudes()),
                 r.state().amplitudes()) < 1e-15);
}

TEST_CASE("strongly entangling layer examples") {
  const std::vector<int> q{0, 1};
  const std::vector<double> zero(6, 0.0);
  Register a(2);
  strongly_entangling_layer(a, q, zero);
  CHECK(a.state()[0] == cplx(1, 0));

  Register b(StateVector::basis(2, 0b10));
  strongly_entangling_layer(b, q, zero);
  CHECK(b.state()[0b01] == cplx(1, 0));

  CHECK_THROWS_AS(strongly_entangling_layer(b, q, std::vector<double>(5)), DimensionError);
  CHECK_THROWS_AS(strongly_entangling_layer(b, std::vector<int>{0}, std::vector<double>(3)),
                  DimensionError);
}

TEST_CASE("ansatz layers equal their dense composition for k <= 4") {
  std::mt19937_64 rng(4);
  for (int k = 2; k <= 4; ++k) {
    auto psi = oracle::random_state(rng, k);
    const oracle::Vec v = oracle::to_vec(psi.amplitudes());

    const auto qs = range(0, k);
    auto p = oracle::random_vector(rng, 3 * k, -kPi, kPi);
    Register r(psi);
    strongly_entangling_layer(r, qs, p);
    CHECK(max_diff(oracle::strong_ent(k, qs, p) * v, r.state().amplitudes()) < 1e-10);
    CHECK(std::abs(r.state().norm() - 1.0) < 1e-12);

    strongly_entangling_layer_adjoint(r, qs, p);
    CHECK(max_diff(v, r.state().amplitudes()) < 1e-10);

    // Staircase over the first k - 1 qubits into the last one.
    const auto data = range(0, k - 1);
    auto mp = oracle::random_vector(rng, 2 * (k - 1), -kPi, kPi);
    Register m(psi);
    mps_layer(m, data, k - 1, mp);
    CHECK(max_diff(oracle::mps(k, data, k - 1, mp) * v, m.state().amplitudes()) < 1e-10);
    CHECK(std::abs(m.state().norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("mps layer examples") {
  Register a(3);
  mps_layer(a, std::vector<int>{0, 1}, 2, std::vector<double>(4, 0.0));
  CHECK(a.state()[0] == cplx(1, 0));

  // d = 2 staircase against an explicitly written 8x8 product.
  std::mt19937_64 rng(5);
  auto p = oracle::random_vector(rng, 4, -kPi, kPi);
  auto psi = oracle::random_state(rng, 3);
  const oracle::Mat u = oracle::cnot(3, 1, 2) * oracle::on_qubit(3, 2, oracle::ry(p[3])) *
                        oracle::on_qubit(3, 1, oracle::ry(p[2])) * oracle::cnot(3, 0, 1) *
                        oracle::on_qubit(3, 1, oracle::ry(p[1])) *
                        oracle::on_qubit(3, 0, oracle::ry(p[0]));
  Register r(psi);
  mps_layer(r, std::vector<int>{0, 1}, 2, p);
  CHECK(max_diff(u * oracle::to_vec(psi.amplitudes()), r.state().amplitudes()) < 1e-12);

  CHECK_THROWS_AS(mps_layer(r, std::vector<int>{0, 1}, 1, p), DimensionError);
  CHECK_THROWS_AS(mps_layer(r, std::vector<int>{0, 1}, 2, std::vector<double>(3)),
                  DimensionError);
}

TEST_CASE("every gate preserves the norm") {
  std::mt19937_64 rng(6);
  Register r(oracle::random_state(rng, 5));
  std::uniform_int_distribution<int> q(0, 4);
  for (int i = 0; i < 200; ++i) {
    const int a = q(rng);
    int b = q(rng);
    if (b == a) b = (a + 1) % 5;
    int c = (b + 1) % 5;
    if (c == a) c = (c + 1) % 5;
    switch (i % 4) {
      case 0: rot_gate(r, a, 0.3 * i, 0.7, -0.2 * i); break;
      case 1: ry_gate(r, a, 0.1 * i); break;
      case 2: cnot(r, a, b); break;
      default: cswap(r, a, b, c); break;
    }
    CHECK(std::abs(r.state().norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("z expectations examples") {
  const std::vector<int> q0{0};
  CHECK(z_expectations(StateVector(1), q0)[0] == 1.0);
  const double s = 1 / std::sqrt(2.0);
  CHECK(std::abs(z_expectations(StateVector::from_amplitudes({s, s}), q0)[0]) < 1e-15);
  BranchEnsemble mixed(1, {{0.5, StateVector::basis(1, 0)}, {0.5, StateVector::basis(1, 1)}});
  CHECK(std::abs(z_expectations(mixed, q0)[0]) < 1e-15);
  CHECK_THROWS_AS(z_expectations(StateVector(1), std::vector<int>{1}), DimensionError);
}

TEST_CASE("ensemble invariants are enforced") {
  CHECK_THROWS(BranchEnsemble(1, {{0.6, StateVector(1)}}));
  CHECK_THROWS(BranchEnsemble(1, {{1.0, StateVector(2)}}));
  CHECK_THROWS(BranchEnsemble(1, {}));
  CHECK_THROWS(BranchEnsemble(1, {{1.5, StateVector(1)}, {-0.5, StateVector(1)}}));
}

TEST_CASE("trace to ensemble examples") {
  std::mt19937_64 rng(7);
  auto psi = oracle::random_state(rng, 2);
  std::vector<cplx> prod(8);
  for (int i = 0; i < 4; ++i) prod[i << 1] = psi[i];
  Register r(StateVector::from_amplitudes(prod));
  auto res = trace_to_ensemble(r, std::vector<int>{0, 1}, 4);
  REQUIRE(res.ensemble.size() == 1);
  CHECK(std::abs(res.ensemble.branches()[0].weight - 1.0) < 1e-12);
  CHECK(same_ray(res.ensemble.branches()[0].state, psi));

  const double s = 1 / std::sqrt(2.0);
  Register bell(StateVector::from_amplitudes({s, 0, 0, s}));
  auto b = trace_to_ensemble(bell, std::vector<int>{0}, 4);
  REQUIRE(b.ensemble.size() == 2);
  for (const auto& br : b.ensemble.branches()) CHECK(std::abs(br.weight - 0.5) < 1e-12);

  std::vector<cplx> ghz(8);
  ghz[0] = s;
  ghz[7] = s;
  Register g(StateVector::from_amplitudes(ghz));
  auto t = trace_to_ensemble(g, std::vector<int>{0, 1}, 1);
  REQUIRE(t.ensemble.size() == 1);
  CHECK(std::abs(t.ensemble.branches()[0].weight - 1.0) < 1e-12);
  CHECK(std::abs(t.discarded - 0.5) < 1e-12);
}

TEST_CASE("untruncated trace reconstructs the reduced density matrix") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto psi = oracle::random_state(rng, 5);
    const std::vector<int> keep = trial % 2 ? std::vector<int>{1, 3} : std::vector<int>{4, 0, 2};
    const int nk = static_cast<int>(keep.size());
    const oracle::Mat exact = oracle::partial_trace(oracle::to_vec(psi.amplitudes()), 5, keep);

    CHECK((reduced_density_matrix(psi, keep) - exact).norm() < 1e-12);

    auto res = trace_to_ensemble(Register(psi), keep, 1 << nk);
    CHECK((res.ensemble.density_matrix() - exact).norm() < 1e-10);
    CHECK(res.discarded < 1e-12);

    double total = 0;
    for (const auto& b : res.ensemble.branches()) total += b.weight;
    CHECK(std::abs(total - 1.0) < 1e-9);

    const auto z = z_expectations(res.ensemble, range(0, nk));
    const auto zr = oracle::z_from_density(exact, nk);
    for (int q = 0; q < nk; ++q) CHECK(std::abs(z[q] - zr[q]) < 1e-10);
  }
}

TEST_CASE("truncation keeps the largest eigenvalues") {
  oracle::Mat rho = oracle::Mat::Zero(4, 4);
  rho(0, 0) = 0.1;
  rho(1, 1) = 0.4;
  rho(2, 2) = 0.3;
  rho(3, 3) = 0.2;
  auto res = ensemble_from_density(rho, 2);
  REQUIRE(res.ensemble.size() == 2);
  CHECK(std::abs(res.discarded - 0.3) < 1e-12);
  CHECK(std::abs(res.ensemble.branches()[0].weight + res.ensemble.branches()[1].weight - 1.0) <
        1e-12);
  const auto z = z_expectations(res.ensemble, std::vector<int>{0});
  // Kept |01> (0.4) and |10> (0.3), renormalized on qubit 0.
  CHECK(std::abs(z[0] - (0.4 - 0.3) / 0.7) < 1e-12);

  oracle::Mat bad = rho;
  bad(0, 1) = 0.2;
  CHECK_THROWS_AS(ensemble_from_density(bad, 4), NumericalError);
}
