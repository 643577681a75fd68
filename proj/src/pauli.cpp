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

#include "mqt/pauli.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

constexpr double kNormTol = 1e-9;

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) return -1;
  return std::countr_zero(n);
}

inline double parity_sign(std::uint64_t b, std::uint64_t z) {
  return (std::popcount(b & z) & 1) ? -1.0 : 1.0;
}

inline cplx i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double l2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int k) : k_(k), amps_(std::size_t{1} << k) {
  if (k < 0 || k > 30) throw DimensionError(fmt::format("invalid qubit count {}", k));
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
  const int k = log2_exact(amps.size());
  if (k < 0) {
    throw DimensionError(fmt::format("amplitude count {} is not a power of two", amps.size()));
  }
  const double n = l2(amps);
  if (std::abs(n - 1.0) > kNormTol) {
    throw DimensionError(fmt::format("state norm {} differs from 1", n));
  }
  StateVector s;
  s.k_ = k;
  s.amps_ = std::move(amps);
  return s;
}

StateVector StateVector::normalized(std::vector<cplx> amps) {
  const double n = l2(amps);
  if (!(n > 1e-300)) throw NumericalError("cannot normalize a zero vector");
  for (auto& a : amps) a /= n;
  return from_amplitudes(std::move(amps));
}

StateVector StateVector::basis(int k, std::uint64_t index) {
  StateVector s(k);
  if (index >= s.dim()) throw DimensionError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const { return l2(amps_); }

// ---------------------------------------------------------------------------
// Pauli words

PauliMask compile_word(std::string_view word) {
  if (word.size() > 63) throw ParseError("word", "more than 63 qubits");
  const auto k = word.size();
  PauliMask m;
  for (std::size_t q = 0; q < k; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (k - 1 - q);
    switch (word[q]) {
      case 'I': break;
      case 'X': m.x |= bit; break;
      case 'Z': m.z |= bit; break;
      case 'Y':
        m.x |= bit;
        m.z |= bit;
        ++m.ny;
        break;
      default:
        throw ParseError("word", fmt::format("invalid character '{}' in \"{}\"", word[q], word));
    }
  }
  return m;
}

StateVector apply_pauli_word(const StateVector& state, std::string_view word) {
  if (static_cast<int>(word.size()) != state.qubits()) {
    throw DimensionError(fmt::format("word length {} != state qubits {}", word.size(),
                                     state.qubits()));
  }
  const PauliMask m = compile_word(word);
  const cplx phase = i_pow(m.ny);
  std::vector<cplx> out(state.dim());
  const auto in = state.amplitudes();
  for (std::uint64_t b = 0; b < in.size(); ++b) {
    out[b ^ m.x] = phase * parity_sign(b, m.z) * in[b];
  }
  return StateVector::from_amplitudes(std::move(out));
}

// ---------------------------------------------------------------------------
// QubitHamiltonian

QubitHamiltonian::QubitHamiltonian(int n_qubits, std::vector<PauliTerm> terms,
                                   HamiltonianMetadata meta)
    : n_q_(n_qubits), terms_(std::move(terms)), meta_(std::move(meta)) {
  if (n_q_ < 1 || n_q_ > 30) {
    throw DimensionError(fmt::format("unsupported qubit count {}", n_q_));
  }
  masks_.reserve(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& term = terms_[t];
    if (static_cast<int>(term.word.size()) != n_q_) {
      throw DimensionError(fmt::format("term {}: word \"{}\" has length {}, expected {}", t,
                                       term.word, term.word.size(), n_q_));
    }
    if (!std::isfinite(term.coefficient)) {
      throw DimensionError(fmt::format("term {}: non-finite coefficient", t));
    }
    masks_.push_back(compile_word(term.word));
  }
  if (!meta_.hf_bitstring.empty()) {
    if (static_cast<int>(meta_.hf_bitstring.size()) != n_q_) {
      throw DimensionError("hf_bitstring length differs from qubit count");
    }
    for (char c : meta_.hf_bitstring) {
      if (c != '0' && c != '1') throw DimensionError("hf_bitstring must be binary");
    }
  }
}

std::uint64_t QubitHamiltonian::hf_index() const {
  if (meta_.hf_bitstring.empty()) throw DataError("Hamiltonian has no hf_bitstring");
  std::uint64_t idx = 0;
  for (char c : meta_.hf_bitstring) idx = (idx << 1) | (c == '1' ? 1 : 0);
  return idx;
}

void QubitHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim() || out.size() != dim()) {
    throw DimensionError("buffer size differs from Hamiltonian dimension");
  }
  std::fill(out.begin(), out.end(), cplx{});
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& m = masks_[t];
    const cplx c = terms_[t].coefficient * i_pow(m.ny);
    for (std::uint64_t b = 0; b < in.size(); ++b) {
      out[b ^ m.x] += c * parity_sign(b, m.z) * in[b];
    }
  }
}

void QubitHamiltonian::apply_real(std::span<const double> in, std::span<double> out) const {
  if (in.size() != dim() || out.size() != dim()) {
    throw DimensionError("buffer size differs from Hamiltonian dimension");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& m = masks_[t];
    if (m.ny & 1) continue;
    const double c = terms_[t].coefficient * ((m.ny & 2) ? -1.0 : 1.0);
    for (std::uint64_t b = 0; b < in.size(); ++b) {
      out[b ^ m.x] += c * parity_sign(b, m.z) * in[b];
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(key, "missing required field");
  return *it;
}

double as_number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(field, "non-finite value");
  return x;
}

std::string as_string(const nlohmann::json& v, const std::string& field) {
  if (!v.is_string()) throw ParseError(field, "expected a string");
  return v.get<std::string>();
}

std::optional<double> optional_number(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return as_number(*it, key);
}

std::string optional_string(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return {};
  return as_string(*it, key);
}

}  // namespace

QubitHamiltonian parse_hamiltonian(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("<document>", "expected a JSON object");
  if (auto it = doc.find("schema"); it != doc.end()) {
    if (as_string(*it, "schema") != "mqt-ham-v1") {
      throw ParseError("schema", fmt::format("unsupported schema {}", it->dump()));
    }
  }

  const auto& nq_field = require(doc, "n_qubits");
  if (!nq_field.is_number_integer()) throw ParseError("n_qubits", "expected an integer");
  const int n_q = nq_field.get<int>();
  if (n_q < 1 || n_q > 30) throw ParseError("n_qubits", fmt::format("out of range: {}", n_q));

  HamiltonianMetadata meta;
  meta.molecule = optional_string(doc, "molecule");
  meta.basis = optional_string(doc, "basis");
  meta.mapping = optional_string(doc, "mapping");
  if (auto r = optional_number(doc, "bond_length_bohr")) {
    if (*r <= 0.0) throw ParseError("bond_length_bohr", "must be positive");
    meta.bond_length_bohr = *r;
  }
  meta.reference_energy = optional_number(doc, "reference_energy_hartree");
  meta.hf_energy = optional_number(doc, "hf_energy_hartree");

  meta.hf_bitstring = as_string(require(doc, "hf_bitstring"), "hf_bitstring");
  if (static_cast<int>(meta.hf_bitstring.size()) != n_q) {
    throw ParseError("hf_bitstring", fmt::format("length {} != n_qubits {}",
                                                 meta.hf_bitstring.size(), n_q));
  }
  for (char c : meta.hf_bitstring) {
    if (c != '0' && c != '1') throw ParseError("hf_bitstring", "must contain only 0 and 1");
  }

  if (auto it = doc.find("nuclei"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("nuclei", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& nd = (*it)[i];
      const std::string base = fmt::format("nuclei[{}]", i);
      if (!nd.is_object()) throw ParseError(base, "expected an object");
      NucleusRecord rec;
      rec.symbol = as_string(require(nd, "symbol"), base + ".symbol");
      const auto& z = require(nd, "proton_number");
      if (!z.is_number_integer() || z.get<int>() < 1) {
        throw ParseError(base + ".proton_number", "expected a positive integer");
      }
      rec.proton_number = z.get<int>();
      const auto& xyz = require(nd, "xyz_bohr");
      if (!xyz.is_array() || xyz.size() != 3) {
        throw ParseError(base + ".xyz_bohr", "expected 3 coordinates");
      }
      for (int c = 0; c < 3; ++c) {
        rec.xyz_bohr[c] = as_number(xyz[c], fmt::format("{}.xyz_bohr[{}]", base, c));
      }
      meta.nuclei.push_back(rec);
    }
  }
  if (auto it = doc.find("electron_ids"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("electron_ids", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& group = (*it)[i];
      const std::string base = fmt::format("electron_ids[{}]", i);
      if (!group.is_array()) throw ParseError(base, "expected an array of integers");
      std::vector<int> ids;
      for (std::size_t e = 0; e < group.size(); ++e) {
        if (!group[e].is_number_integer() || group[e].get<int>() < 1) {
          throw ParseError(fmt::format("{}[{}]", base, e), "expected a positive integer");
        }
        ids.push_back(group[e].get<int>());
      }
      meta.electron_ids.push_back(std::move(ids));
    }
    if (!meta.nuclei.empty() && meta.electron_ids.size() != meta.nuclei.size()) {
      throw ParseError("electron_ids", "one identifier group per nucleus required");
    }
  }

  const auto& terms_field = require(doc, "terms");
  if (!terms_field.is_array()) throw ParseError("terms", "expected an array");
  std::vector<PauliTerm> terms;
  terms.reserve(terms_field.size());
  for (std::size_t t = 0; t < terms_field.size(); ++t) {
    const auto& td = terms_field[t];
    const std::string base = fmt::format("terms[{}]", t);
    if (!td.is_object()) throw ParseError(base, "expected an object");
    PauliTerm term;
    term.coefficient = as_number(require(td, "coeff"), base + ".coeff");
    term.word = as_string(require(td, "word"), base + ".word");
    if (static_cast<int>(term.word.size()) != n_q) {
      throw ParseError(base + ".word", fmt::format("length {} != n_qubits {}",
                                                   term.word.size(), n_q));
    }
    try {
      compile_word(term.word);
    } catch (const ParseError& e) {
      throw ParseError(base + ".word", e.what());
    }
    terms.push_back(std::move(term));
  }
  return QubitHamiltonian(n_q, std::move(terms), std::move(meta));
}

QubitHamiltonian parse_hamiltonian(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  return parse_hamiltonian(doc);
}

// ---------------------------------------------------------------------------
// Expectation values

double expectation(const QubitHamiltonian& h, const StateVector& state) {
  if (h.qubits() != state.qubits()) {
    throw DimensionError(fmt::format("Hamiltonian on {} qubits, state on {}", h.qubits(),
                                     state.qubits()));
  }
  const auto psi = state.amplitudes();
  cplx total{};
  const auto& masks = h.masks();
  const auto& terms = h.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& m = masks[t];
    cplx acc{};
    for (std::uint64_t b = 0; b < psi.size(); ++b) {
      acc += std::conj(psi[b ^ m.x]) * parity_sign(b, m.z) * psi[b];
    }
    total += terms[t].coefficient * i_pow(m.ny) * acc;
  }
  if (std::abs(total.imag()) > 1e-10) {
    throw NumericalError(fmt::format("expectation has imaginary residue {}", total.imag()));
  }
  return total.real();
}

double expectation_real(const QubitHamiltonian& h, std::span<const double> v) {
  std::vector<double> hv(v.size());
  h.apply_real(v, hv);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num += v[i] * hv[i];
    den += v[i] * v[i];
  }
  if (!(den > 0.0)) throw NumericalError("expectation of a zero vector");
  return num / den;
}

// ---------------------------------------------------------------------------
// Lanczos

double ground_energy(const QubitHamiltonian& h, double tol, const LanczosOptions& opts) {
  if (h.qubits() > 16) {
    throw DimensionError(fmt::format("ground_energy limited to 16 qubits, got {}", h.qubits()));
  }
  const std::size_t dim = h.dim();
  using Vec = Eigen::VectorXcd;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
  v.normalize();

  auto apply = [&](const Vec& in, Vec& out) {
    out.resize(dim);
    h.apply(std::span<const cplx>(in.data(), dim), std::span<cplx>(out.data(), dim));
  };

  double best = std::numeric_limits<double>::infinity();
  double best_res = std::numeric_limits<double>::infinity();
  const int m_max = static_cast<int>(std::min<std::size_t>(opts.krylov_dim, dim));

  std::vector<Vec> basis;
  Vec w, hx;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    basis.assign(1, v);
    std::vector<double> alpha, beta;
    for (int j = 0; j < m_max; ++j) {
      apply(basis[j], w);
      alpha.push_back(basis[j].dot(w).real());
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) w -= q * q.dot(w);
      }
      const double b = w.norm();
      if (j + 1 == m_max || b < 1e-12 * std::max(1.0, std::abs(alpha.back()))) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[0];
    const Eigen::VectorXd y = tri.eigenvectors().col(0);

    Vec x = Vec::Zero(dim);
    for (int i = 0; i < m; ++i) x += y[i] * basis[i];
    x.normalize();
    apply(x, hx);
    const double res = (hx - theta * x).norm();
    if (res < best_res) {
      best_res = res;
      best = theta;
    }
    if (res <= tol) return theta;
    v = x;
  }
  throw ConvergenceError(
      fmt::format("Lanczos did not converge: estimate {:.12g}, residual {:.3e} > tol {:.3e}",
                  best, best_res, tol),
      best, best_res);
}

}  // namespace mqt
