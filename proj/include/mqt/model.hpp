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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mqt/circuits.hpp"
#include "mqt/molecule.hpp"
#include "mqt/params.hpp"
#include "mqt/pauli.hpp"

namespace mqt {

enum class ModelKind { Quantum, Classical };

std::string to_string(ModelKind kind);
/// "quantum" or "classical"; throws std::invalid_argument otherwise.
ModelKind parse_model_kind(const std::string& name);

struct ModelConfig {
  int d_emb = 4;
  int layers = 2;
  ModelKind kind = ModelKind::Quantum;
  /// Branch cap for the mixed token state; <= 0 keeps every branch.
  int max_branches = 4;
  /// Rows of the shared electron-identifier embedding table.
  int max_electron_id = 4;

  /// d_emb >= 4 is required: the tokenizer map W_en must have full column
  /// rank for the aggregation inversion.
  void validate() const;
};

/// n x m x d feature tensor, row-major with the feature axis fastest.
class TokenTensor {
 public:
  TokenTensor() = default;
  TokenTensor(int n, int m, int d) : n_(n), m_(m), d_(d), data_(std::size_t(n) * m * d) {}

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int d() const noexcept { return d_; }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  /// The d features of token (i, j).
  const double* token(int i, int j) const { return &data_[index(i, j, 0)]; }

  /// The m x d token block of electron i.
  std::span<const double> block(int i) const {
    return std::span<const double>(data_).subspan(std::size_t(i) * m_ * d_, std::size_t(m_) * d_);
  }
  std::span<double> block(int i) {
    return std::span<double>(data_).subspan(std::size_t(i) * m_ * d_, std::size_t(m_) * d_);
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool operator==(const TokenTensor& o) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * m_ + j) * d_ + k;
  }
  int n_ = 0, m_ = 0, d_ = 0;
  std::vector<double> data_;
};

struct Tokenized {
  TokenTensor tokens;
  /// n x m x 4 concatenation [p_en_in, r_en_in] before W_en.
  std::vector<double> features;
  /// n x m x 3 nucleus-minus-electron vectors.
  std::vector<double> p_en_in;
  /// n x m distances.
  std::vector<double> r_en_in;
};

/// Registers every shared tensor and draws its initial values from `seed`.
/// Circuit angles are uniform on [0, 2 pi), dense weights uniform on
/// +-1/sqrt(fan_in), norm scales 1 and shifts 0.
void init_params(ParamStore& store, const ModelConfig& cfg, std::uint64_t seed);

std::string head_weight_name(const std::string& molecule);
std::string head_bias_name(const std::string& molecule);
/// Adds a zero head mapping 2 d_emb -> 2^n_qubits for `molecule`. Existing
/// heads are kept; a shape mismatch throws DimensionError.
void add_head(ParamStore& store, const ModelConfig& cfg, const std::string& molecule,
              int n_qubits);

/// Electron and nucleus token features at bond length r (Bohr).
Tokenized tokenize(const MoleculeSpec& mol, double r, const ParamStore& store,
                   const ModelConfig& cfg);

AttentionParams attention_params(const ParamStore& store, int layer, int d);

/// Per-feature standardization with eps 1e-5 and population variance,
/// followed by out = scale * xhat + shift.
void layer_norm(std::span<const double> x, std::span<const double> scale,
                std::span<const double> shift, std::span<double> out);

/// One quantum Transformer layer: squash arccos(tanh(N_p x)), attention block
/// per electron, residual and normalization.
TokenTensor qt_layer(const TokenTensor& in, const ParamStore& store, int layer,
                     std::span<const double> proton_numbers, const ModelConfig& cfg,
                     BlockDiagnostics* diag = nullptr);
/// Same as qt_layer with the quantum block output replaced by `block_out`.
TokenTensor residual_normalize(const TokenTensor& in, const TokenTensor& block_out,
                               const ParamStore& store, int layer);

/// Attention weights of one classical layer, one m x m matrix per electron.
struct ClassicalTrace {
  std::vector<Eigen::MatrixXd> attention;
};

/// Encoder-only classical Transformer layer with single-head attention over
/// the nucleus tokens of each electron.
TokenTensor classical_layer(const TokenTensor& in, const ParamStore& store, int layer,
                            ClassicalTrace* trace = nullptr);

/// All cfg.layers layers of the configured kind.
TokenTensor run_layers(const TokenTensor& tokens, const MoleculeSpec& mol,
                       const ParamStore& store, const ModelConfig& cfg,
                       BlockDiagnostics* diag = nullptr);

/// [p_en_out, r_en_out] = (W^T W)^-1 W^T y per token, n x m x 4. Throws
/// NumericalError when cond(W^T W) exceeds 1e8.
std::vector<double> invert_tokenizer(const TokenTensor& y, std::span<const double> w_en);

/// Rescales r_out to the mean and population std of r_in.
std::vector<double> moment_match(std::span<const double> r_out, std::span<const double> r_in);

/// y_ijk -> exp(-r_en(i,j)) N_p(j) y_ijk.
TokenTensor amplify(const TokenTensor& y, std::span<const double> r_en,
                    std::span<const double> proton_numbers);

/// Distances r_en used by the aggregation, n x m.
std::vector<double> updated_distances(const TokenTensor& y, const Tokenized& tok,
                                      const ParamStore& store);

/// Aggregation of y_L into a 2 d_emb feature vector.
std::vector<double> aggregate(const TokenTensor& y, const Tokenized& tok,
                              std::span<const double> proton_numbers, const ParamStore& store,
                              const ModelConfig& cfg);

/// Unnormalized head(agg) + e_HF.
std::vector<double> head_amplitudes(std::span<const double> agg, const ParamStore& store,
                                    const std::string& molecule, const QubitHamiltonian& h);
/// Normalized head(agg) + e_HF; throws NumericalError when the norm is below 1e-12.
StateVector assemble_state(std::span<const double> agg, const ParamStore& store,
                           const std::string& molecule, const QubitHamiltonian& h);

struct ForwardInfo {
  double energy = 0.0;
  double discarded_mass = 0.0;
};

/// <H> on the model state for molecule `mol` at bond length r (tokenizer
/// geometry) with Hamiltonian h.
double energy_forward(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                      const ParamStore& store, const ModelConfig& cfg,
                      ForwardInfo* info = nullptr);

/// Energy plus the analytic gradient of the aggregation tensors and this
/// molecule's head. `grad` has the full store size; those entries are
/// overwritten and every other entry is left untouched.
double energy_downstream_grad(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                              const ParamStore& store, const ModelConfig& cfg,
                              std::span<double> grad, ForwardInfo* info = nullptr);

}  // namespace mqt
