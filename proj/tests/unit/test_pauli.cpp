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
#include <fstream>
#include <sstream>

#include "mqt/dataset.hpp"
#include "mqt/errors.hpp"
#include "mqt/pauli.hpp"
#include "support/oracles.hpp"

using namespace mqt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kEqFile = std::string(MQT_DATA_DIR) + "/h2_631g_eq/H2_r1.4011.json";

std::string parse_error_field(const std::string& doc) {
  try {
    parse_hamiltonian(doc);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("parse a one-term document") {
  auto h = parse_hamiltonian(R"({"n_qubits":2,"terms":[{"coeff":0.5,"word":"ZI"}],"hf_bitstring":"00"})");
  CHECK(h.qubits() == 2);
  REQUIRE(h.terms().size() == 1);
  CHECK(h.terms()[0].coefficient == 0.5);
  CHECK(h.terms()[0].word == "ZI");
}

TEST_CASE("parse errors name the offending field") {
  CHECK(parse_error_field(R"({"n_qubits":2,"terms":[{"coeff":1,"word":"AZ"}],"hf_bitstring":"00"})") ==
        "terms[0].word");
  CHECK(parse_error_field(R"({"n_qubits":2,"terms":[{"coeff":1,"word":"ZZZ"}],"hf_bitstring":"00"})") ==
        "terms[0].word");
  CHECK(parse_error_field(R"({"n_qubits":2,"terms":[],"hf_bitstring":"02"})") == "hf_bitstring");
  CHECK(parse_error_field(R"({"n_qubits":2,"terms":[],"hf_bitstring":"0"})") == "hf_bitstring");
  CHECK(parse_error_field(R"({"n_qubits":2,"hf_bitstring":"00"})") == "terms");
  CHECK(parse_error_field(R"({"n_qubits":2,"terms":[{"coeff":"x","word":"ZI"}],"hf_bitstring":"00"})") ==
        "terms[0].coeff");
  CHECK(parse_error_field(R"({"schema":"other","n_qubits":1,"terms":[],"hf_bitstring":"0"})") ==
        "schema");
  CHECK(parse_error_field("{not json") == "<document>");
}

TEST_CASE("term order is preserved") {
  auto h = parse_hamiltonian(
      R"({"n_qubits":2,"terms":[{"coeff":1,"word":"XX"},{"coeff":2,"word":"II"},{"coeff":3,"word":"ZY"}],"hf_bitstring":"10"})");
  REQUIRE(h.terms().size() == 3);
  CHECK(h.terms()[0].word == "XX");
  CHECK(h.terms()[1].word == "II");
  CHECK(h.terms()[2].word == "ZY");
  CHECK(h.hf_index() == 2);
}

TEST_CASE("H2 6-31G file at equilibrium") {
  auto h = parse_hamiltonian(read_file(kEqFile));
  CHECK(h.qubits() == 8);
  CHECK(h.metadata().hf_bitstring.size() == 8);
  REQUIRE(h.metadata().reference_energy.has_value());
  CHECK(std::abs(ground_energy(h) - *h.metadata().reference_energy) < 1e-6);
  REQUIRE(h.metadata().hf_energy.has_value());
  CHECK(std::abs(expectation(h, StateVector::basis(8, h.hf_index())) - *h.metadata().hf_energy) <
        1e-8);
}

TEST_CASE("single Pauli words on |0>") {
  const StateVector zero(1);
  auto z = apply_pauli_word(zero, "Z");
  CHECK(std::abs(z[0] - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(z[1]) < 1e-15);
  auto x = apply_pauli_word(zero, "X");
  CHECK(std::abs(x[0]) < 1e-15);
  CHECK(std::abs(x[1] - cplx(1, 0)) < 1e-15);
  auto y = apply_pauli_word(zero, "Y");
  CHECK(std::abs(y[0]) < 1e-15);
  CHECK(std::abs(y[1] - cplx(0, 1)) < 1e-15);
  CHECK_THROWS_AS(apply_pauli_word(zero, "XX"), DimensionError);
}

TEST_CASE("Pauli words are involutions and match their dense matrix") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + trial % 5;
    std::string w;
    for (int q = 0; q < k; ++q) w += "IXYZ"[pick(rng)];
    auto psi = oracle::random_state(rng, k);
    auto once = apply_pauli_word(psi, w);
    auto twice = apply_pauli_word(once, w);
    CHECK(std::abs(once.norm() - 1.0) < 1e-12);
    const oracle::Vec dense = oracle::word_matrix(w) * oracle::to_vec(psi.amplitudes());
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      CHECK(std::abs(twice[i] - psi[i]) < 1e-12);
      CHECK(std::abs(once[i] - dense[i]) < 1e-12);
    }
  }
}

TEST_CASE("qubit 0 is the most significant bit") {
  auto s = apply_pauli_word(StateVector(2), "XI");
  CHECK(std::abs(s[2] - cplx(1, 0)) < 1e-15);
}

TEST_CASE("expectation examples") {
  QubitHamiltonian z(1, {{1.0, "Z"}});
  CHECK(expectation(z, StateVector(1)) == doctest::Approx(1.0).epsilon(1e-15));
  QubitHamiltonian x(1, {{1.0, "X"}});
  const double s = 1.0 / std::sqrt(2.0);
  auto plus = StateVector::from_amplitudes({s, s});
  CHECK(std::abs(expectation(x, plus) - 1.0) < 1e-15);
  CHECK_THROWS_AS(expectation(x, StateVector(2)), DimensionError);
}

TEST_CASE("expectation matches the dense quadratic form") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = oracle::random_hamiltonian(rng, 4, 12);
    auto psi = oracle::random_state(rng, 4);
    const oracle::Vec v = oracle::to_vec(psi.amplitudes());
    const cplx dense = v.dot(oracle::dense_hamiltonian(h) * v);
    CHECK(std::abs(dense.imag()) < 1e-10);
    CHECK(std::abs(expectation(h, psi) - dense.real()) < 1e-10);
  }
}

TEST_CASE("apply and apply_real agree with the dense matrix") {
  std::mt19937_64 rng(6);
  auto h = oracle::random_hamiltonian(rng, 3, 10);
  const oracle::Mat m = oracle::dense_hamiltonian(h);
  auto psi = oracle::random_state(rng, 3);
  std::vector<cplx> out(8);
  h.apply(psi.amplitudes(), out);
  const oracle::Vec ref = m * oracle::to_vec(psi.amplitudes());
  for (int i = 0; i < 8; ++i) CHECK(std::abs(out[i] - ref[i]) < 1e-12);

  auto v = oracle::random_vector(rng, 8);
  std::vector<double> outr(8);
  h.apply_real(v, outr);
  const Eigen::VectorXd rv = m.real() * Eigen::Map<Eigen::VectorXd>(v.data(), 8);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(outr[i] - rv[i]) < 1e-12);

  std::vector<cplx> vc(v.begin(), v.end());
  auto sv = StateVector::normalized(vc);
  CHECK(std::abs(expectation_real(h, v) - expectation(h, sv)) < 1e-12);
}

TEST_CASE("ground energy examples") {
  QubitHamiltonian h(2, {{1.0, "ZI"}, {1.0, "IZ"}});
  CHECK(std::abs(ground_energy(h) + 2.0) < 1e-9);

  std::mt19937_64 rng(7);
  auto big = oracle::random_hamiltonian(rng, 6, 30);
  CHECK(std::abs(ground_energy(big) - oracle::dense_ground(oracle::dense_hamiltonian(big))) < 1e-8);
}

TEST_CASE("ground energy is a lower bound on random states") {
  std::mt19937_64 rng(8);
  auto h = oracle::random_hamiltonian(rng, 5, 20);
  const double e0 = ground_energy(h);
  for (int i = 0; i < 200; ++i) CHECK(e0 <= expectation(h, oracle::random_state(rng, 5)) + 1e-12);
}

TEST_CASE("ground energy rejects more than 16 qubits") {
  QubitHamiltonian h(17, {{1.0, std::string(17, 'Z')}});
  CHECK_THROWS_AS(ground_energy(h), DimensionError);
}

TEST_CASE("non-convergence carries the best estimate") {
  std::mt19937_64 rng(9);
  auto h = oracle::random_hamiltonian(rng, 6, 30);
  LanczosOptions opts;
  opts.krylov_dim = 3;
  opts.max_restarts = 0;
  try {
    ground_energy(h, 1e-14, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.residual() > 1e-14);
    CHECK(e.estimate() >= oracle::dense_ground(oracle::dense_hamiltonian(h)) - 1e-9);
  }
}

TEST_CASE("state vector invariants") {
  CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 1.0}), DimensionError);
  CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 0.0, 0.0}), DimensionError);
  CHECK_THROWS_AS(StateVector::normalized({0.0, 0.0}), NumericalError);
  auto b = StateVector::basis(3, 5);
  CHECK(b[5] == cplx(1, 0));
}

TEST_CASE("dataset loading groups and snaps") {
  auto data = Dataset::load(std::string(MQT_DATA_DIR) + "/h2_sto3g_bk");
  REQUIRE(data.has("H2"));
  const auto& entries = data.entries("H2");
  CHECK(entries.size() == 100);
  CHECK(entries.front().bond_length() == doctest::Approx(0.05));
  CHECK(data.snapped("H2", 1.4249, 0.05).bond_length() == doctest::Approx(1.40));
  CHECK(data.snapped("H2", 1.4251, 0.05).bond_length() == doctest::Approx(1.45));
  CHECK(data.exact("H2", 2.5).bond_length() == doctest::Approx(2.5));
  CHECK_THROWS_AS(data.exact("H2", 2.51), DataError);
  CHECK_THROWS_AS(Dataset::load(std::string(MQT_DATA_DIR) + "/does_not_exist"), DataError);
}
