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

// Dense reference implementations used only by the tests. Everything here is
// built from explicit matrices so it shares no code path with the library.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mqt/pauli.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad Pauli character");
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Leftmost character is the leftmost Kronecker factor.
inline Mat word_matrix(const std::string& word) {
  Mat m = Mat::Identity(1, 1);
  for (char c : word) m = kron(m, pauli(c));
  return m;
}

inline Mat dense_hamiltonian(const mqt::QubitHamiltonian& h) {
  Mat m = Mat::Zero(h.dim(), h.dim());
  for (const auto& t : h.terms()) m += t.coefficient * word_matrix(t.word);
  return m;
}

inline double dense_ground(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

inline Mat rz(double t) {
  Mat m(2, 2);
  m << std::exp(cplx(0, -t / 2)), 0, 0, std::exp(cplx(0, t / 2));
  return m;
}

inline Mat ry(double t) {
  Mat m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

inline Mat rot(double z1, double y, double z2) { return rz(z1) * ry(y) * rz(z2); }

/// Single-qubit gate on qubit q of a k-qubit register.
inline Mat on_qubit(int k, int q, const Mat& g) {
  return kron(kron(Mat::Identity(1 << q, 1 << q), g),
              Mat::Identity(1 << (k - q - 1), 1 << (k - q - 1)));
}

inline bool bit(std::uint64_t b, int k, int q) { return (b >> (k - 1 - q)) & 1u; }
inline std::uint64_t flip(std::uint64_t b, int k, int q) {
  return b ^ (std::uint64_t{1} << (k - 1 - q));
}

inline Mat permutation(int k, const std::function<std::uint64_t(std::uint64_t)>& f) {
  const Eigen::Index dim = Eigen::Index{1} << k;
  Mat m = Mat::Zero(dim, dim);
  for (std::uint64_t b = 0; b < std::uint64_t(dim); ++b) m(f(b), b) = 1.0;
  return m;
}

inline Mat cnot(int k, int c, int t) {
  return permutation(k, [=](std::uint64_t b) { return bit(b, k, c) ? flip(b, k, t) : b; });
}

inline Mat cswap(int k, int c, int a, int b2) {
  return permutation(k, [=](std::uint64_t b) {
    if (!bit(b, k, c) || bit(b, k, a) == bit(b, k, b2)) return b;
    return flip(flip(b, k, a), k, b2);
  });
}

inline Mat strong_ent(int k, const std::vector<int>& qs, std::span<const double> p) {
  const int n = static_cast<int>(qs.size());
  Mat u = Mat::Identity(1 << k, 1 << k);
  for (int i = 0; i < n; ++i) u = on_qubit(k, qs[i], rot(p[3 * i], p[3 * i + 1], p[3 * i + 2])) * u;
  for (int i = 0; i < n; ++i) u = cnot(k, qs[i], qs[(i + 1) % n]) * u;
  return u;
}

inline Mat mps(int k, const std::vector<int>& qs, int anc, std::span<const double> p) {
  const int n = static_cast<int>(qs.size());
  Mat u = Mat::Identity(1 << k, 1 << k);
  for (int b = 0; b < n; ++b) {
    const int a = qs[b], c = b + 1 < n ? qs[b + 1] : anc;
    u = on_qubit(k, a, ry(p[2 * b])) * u;
    u = on_qubit(k, c, ry(p[2 * b + 1])) * u;
    u = cnot(k, a, c) * u;
  }
  return u;
}

/// Reduced density matrix of a k-qubit pure state on `keep` (in that order).
inline Mat partial_trace(const Vec& psi, int k, const std::vector<int>& keep) {
  const int nk = static_cast<int>(keep.size());
  std::vector<int> rest;
  for (int q = 0; q < k; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  }
  auto index = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t b = 0;
    for (int i = 0; i < nk; ++i) {
      if ((a >> (nk - 1 - i)) & 1u) b |= std::uint64_t{1} << (k - 1 - keep[i]);
    }
    const int nr = static_cast<int>(rest.size());
    for (int i = 0; i < nr; ++i) {
      if ((e >> (nr - 1 - i)) & 1u) b |= std::uint64_t{1} << (k - 1 - rest[i]);
    }
    return b;
  };
  const std::uint64_t da = std::uint64_t{1} << nk, de = std::uint64_t{1} << rest.size();
  Mat rho = Mat::Zero(da, da);
  for (std::uint64_t a = 0; a < da; ++a) {
    for (std::uint64_t b = 0; b < da; ++b) {
      cplx s = 0;
      for (std::uint64_t e = 0; e < de; ++e) s += psi[index(a, e)] * std::conj(psi[index(b, e)]);
      rho(a, b) = s;
    }
  }
  return rho;
}

/// <Z_q> for each qubit of a density matrix on d qubits.
inline std::vector<double> z_from_density(const Mat& rho, int d) {
  std::vector<double> z(d);
  for (int q = 0; q < d; ++q) z[q] = (rho * on_qubit(d, q, pauli('Z'))).trace().real();
  return z;
}

inline Vec to_vec(std::span<const cplx> a) {
  return Eigen::Map<const Vec>(a.data(), static_cast<Eigen::Index>(a.size()));
}

inline mqt::StateVector random_state(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(std::size_t{1} << k);
  for (auto& x : a) x = cplx(g(rng), g(rng));
  return mqt::StateVector::normalized(std::move(a));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

/// Random real-coefficient Pauli sum on nq qubits.
inline mqt::QubitHamiltonian random_hamiltonian(std::mt19937_64& rng, int nq, int terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<mqt::PauliTerm> t;
  for (int i = 0; i < terms; ++i) {
    std::string w;
    for (int q = 0; q < nq; ++q) w += "IXYZ"[pick(rng)];
    t.push_back({u(rng), w});
  }
  mqt::HamiltonianMetadata meta;
  meta.hf_bitstring = std::string(nq, '0');
  return mqt::QubitHamiltonian(nq, std::move(t), meta);
}

}  // namespace oracle
