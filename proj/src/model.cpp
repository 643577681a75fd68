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

#include "mqt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

constexpr double kNormEps = 1e-5;

// Uniform on [lo, hi) from the top 53 bits, identical on every platform.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

void fill_uniform(std::span<double> t, std::mt19937_64& rng, double lo, double hi) {
  for (double& v : t) v = uniform(rng, lo, hi);
}

void fill_dense(std::span<double> t, std::mt19937_64& rng, std::size_t fan_in) {
  const double b = 1.0 / std::sqrt(static_cast<double>(fan_in));
  fill_uniform(t, rng, -b, b);
}

void add_norm(ParamStore& store, const std::string& prefix, std::size_t width, ParamGroup g) {
  auto s = store.add(prefix + ".scale", {width}, g);
  std::fill(s.begin(), s.end(), 1.0);
  store.add(prefix + ".shift", {width}, g, /*decay=*/false);
}

void init_quantum_layer(ParamStore& store, int l, std::size_t d, std::mt19937_64& rng) {
  const std::string p = fmt::format("layer{}", l);
  const double two_pi = 2.0 * std::numbers::pi;
  fill_uniform(store.add(p + ".query", {d, 3}, ParamGroup::Upstream), rng, 0.0, two_pi);
  fill_uniform(store.add(p + ".key", {d, 3}, ParamGroup::Upstream), rng, 0.0, two_pi);
  fill_uniform(store.add(p + ".value", {std::size_t(kValueLayers), d, 3}, ParamGroup::Upstream),
               rng, 0.0, two_pi);
  fill_uniform(store.add(p + ".mps", {d, 2}, ParamGroup::Upstream), rng, 0.0, two_pi);
  add_norm(store, p + ".norm", d, ParamGroup::Upstream);
}

void init_classical_layer(ParamStore& store, int l, std::size_t d, std::mt19937_64& rng) {
  const std::string p = fmt::format("layer{}", l);
  const auto up = ParamGroup::Upstream;
  add_norm(store, p + ".ln1", d, up);
  for (const char* w : {".wq", ".wk", ".wv", ".wo"}) {
    fill_dense(store.add(p + w, {d, d}, up), rng, d);
  }
  add_norm(store, p + ".ln2", d, up);
  fill_dense(store.add(p + ".ffn.w1", {d, 4 * d}, up), rng, d);
  fill_dense(store.add(p + ".ffn.b1", {4 * d}, up), rng, d);
  fill_dense(store.add(p + ".ffn.w2", {4 * d, d}, up), rng, 4 * d);
  fill_dense(store.add(p + ".ffn.b2", {d}, up), rng, 4 * d);
  add_norm(store, p + ".ln3", d, up);
}

struct NormCache {
  std::vector<double> xhat;
  double inv_sigma = 0.0;
};

void layer_norm_cached(std::span<const double> x, std::span<const double> scale,
                       std::span<const double> shift, std::span<double> out, NormCache* cache) {
  const std::size_t n = x.size();
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mu) * (v - mu);
  var /= static_cast<double>(n);
  const double inv = 1.0 / std::sqrt(var + kNormEps);
  if (cache) {
    cache->xhat.resize(n);
    cache->inv_sigma = inv;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double xh = (x[k] - mu) * inv;
    if (cache) cache->xhat[k] = xh;
    out[k] = scale[k] * xh + shift[k];
  }
}

// Given dL/d(out), accumulates scale and shift gradients and writes dL/dx.
void layer_norm_backward(const NormCache& c, std::span<const double> scale,
                         std::span<const double> g_out, std::span<double> g_scale,
                         std::span<double> g_shift, std::span<double> g_x) {
  const std::size_t n = g_out.size();
  std::vector<double> gxh(n);
  double mean_g = 0.0, mean_gx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    g_scale[k] += g_out[k] * c.xhat[k];
    g_shift[k] += g_out[k];
    gxh[k] = g_out[k] * scale[k];
    mean_g += gxh[k];
    mean_gx += gxh[k] * c.xhat[k];
  }
  mean_g /= static_cast<double>(n);
  mean_gx /= static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    g_x[k] = c.inv_sigma * (gxh[k] - mean_g - c.xhat[k] * mean_gx);
  }
}

// Mean over the L rows of x (L x D) plus the stride-2 kernel-2 convolution.
// The conv output has ceil(L/2) positions; each is duplicated back onto the
// rows it covers and averaged over the L rows, so output t carries weight
// c_t / L with c_t the number of rows in its window.
std::vector<double> pool_forward(std::span<const double> x, int L, int D,
                                 std::span<const double> w, std::span<const double> b) {
  std::vector<double> out(D, 0.0);
  for (int i = 0; i < L; ++i)
    for (int c = 0; c < D; ++c) out[c] += x[std::size_t(i) * D + c] / L;
  const int T = (L + 1) / 2;
  for (int t = 0; t < T; ++t) {
    const double weight = static_cast<double>(std::min(2, L - 2 * t)) / L;
    for (int o = 0; o < D; ++o) {
      double acc = b[o];
      for (int kap = 0; kap < 2; ++kap) {
        const int row = 2 * t + kap;
        if (row >= L) continue;
        for (int c = 0; c < D; ++c) {
          acc += w[(std::size_t(o) * D + c) * 2 + kap] * x[std::size_t(row) * D + c];
        }
      }
      out[o] += weight * acc;
    }
  }
  return out;
}

void pool_backward(std::span<const double> x, int L, int D, std::span<const double> w,
                   std::span<const double> g_out, std::span<double> g_w, std::span<double> g_b,
                   std::span<double> g_x) {
  if (!g_x.empty()) {
    for (int i = 0; i < L; ++i)
      for (int c = 0; c < D; ++c) g_x[std::size_t(i) * D + c] = g_out[c] / L;
  }
  const int T = (L + 1) / 2;
  for (int t = 0; t < T; ++t) {
    const double weight = static_cast<double>(std::min(2, L - 2 * t)) / L;
    for (int o = 0; o < D; ++o) {
      const double go = weight * g_out[o];
      g_b[o] += go;
      for (int kap = 0; kap < 2; ++kap) {
        const int row = 2 * t + kap;
        if (row >= L) continue;
        for (int c = 0; c < D; ++c) {
          const std::size_t wi = (std::size_t(o) * D + c) * 2 + kap;
          g_w[wi] += go * x[std::size_t(row) * D + c];
          if (!g_x.empty()) g_x[std::size_t(row) * D + c] += go * w[wi];
        }
      }
    }
  }
}

std::span<double> grad_of(const ParamStore& store, std::span<double> grad,
                          const std::string& name) {
  const auto& info = store.info(name);
  return grad.subspan(info.offset, info.size);
}

// Downstream pipeline from the amplified tensor to the energy: steps (d)-(h),
// the head and the normalized quadratic form. Fills downstream gradients
// when `grad` is non-empty.
double downstream(const TokenTensor& yamp, std::span<const double> r_en, const ParamStore& store,
                  const ModelConfig& cfg, const std::string& molecule,
                  const QubitHamiltonian& h, std::span<double> grad) {
  const int n = yamp.n(), m = yamp.m(), d = yamp.d();
  const int D = 2 * d;
  const bool want = !grad.empty();
  (void)cfg;

  const auto fc_w = store.get("agg.fc.weight");
  const auto fc_b = store.get("agg.fc.bias");
  const auto cn_w = store.get("agg.conv_nuc.weight");
  const auto cn_b = store.get("agg.conv_nuc.bias");
  const auto ce_w = store.get("agg.conv_elec.weight");
  const auto ce_b = store.get("agg.conv_elec.bias");
  const auto ne_s = store.get("agg.norm_elec.scale");
  const auto ne_b = store.get("agg.norm_elec.shift");
  const auto no_s = store.get("agg.norm_out.scale");
  const auto no_b = store.get("agg.norm_out.shift");

  // (d) FC d -> 2d per token.
  std::vector<double> q(std::size_t(n) * m * D);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double* qo = &q[(std::size_t(i) * m + j) * D];
      for (int o = 0; o < D; ++o) {
        double acc = fc_b[o];
        for (int k = 0; k < d; ++k) acc += fc_w[std::size_t(o) * d + k] * yamp(i, j, k);
        qo[o] = acc;
      }
    }
  }

  // (e) nucleus-axis pooling, (f) normalization and exp(-r_e(i)).
  std::vector<double> w(std::size_t(n) * D), u(std::size_t(n) * D);
  std::vector<double> r_e(n, 0.0);
  std::vector<NormCache> ncache(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) r_e[i] += r_en[std::size_t(i) * m + j] / m;
    const auto qi = std::span<const double>(q).subspan(std::size_t(i) * m * D, std::size_t(m) * D);
    const auto wi = pool_forward(qi, m, D, cn_w, cn_b);
    std::copy(wi.begin(), wi.end(), w.begin() + std::ptrdiff_t(i) * D);
    auto ui = std::span<double>(u).subspan(std::size_t(i) * D, D);
    layer_norm_cached(wi, ne_s, ne_b, ui, &ncache[i]);
    const double amp = std::exp(-r_e[i]);
    for (double& v : ui) v *= amp;
  }

  // (g) electron-axis pooling, (h) normalization and exp(-rbar).
  const auto s = pool_forward(u, n, D, ce_w, ce_b);
  double rbar = 0.0;
  for (double v : r_e) rbar += v / n;
  NormCache scache;
  std::vector<double> agg(D);
  layer_norm_cached(s, no_s, no_b, agg, &scache);
  const double amp_r = std::exp(-rbar);
  for (double& v : agg) v *= amp_r;

  // Head and HF prior.
  auto v = head_amplitudes(agg, store, molecule, h);
  double vv = 0.0;
  for (double a : v) vv += a * a;
  if (vv < 1e-24) throw NumericalError("assembled state has norm below 1e-12");
  std::vector<double> hv(v.size());
  h.apply_real(v, hv);
  double vhv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) vhv += v[i] * hv[i];
  const double energy = vhv / vv;
  if (!want) return energy;

  // Backward.
  const std::size_t dim = v.size();
  std::vector<double> g_v(dim);
  for (std::size_t i = 0; i < dim; ++i) g_v[i] = 2.0 * (hv[i] - energy * v[i]) / vv;

  const auto head_w = store.get(head_weight_name(molecule));
  auto gh_w = grad_of(store, grad, head_weight_name(molecule));
  auto gh_b = grad_of(store, grad, head_bias_name(molecule));
  std::vector<double> g_agg(D, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    gh_b[r] = g_v[r];
    for (int c = 0; c < D; ++c) {
      gh_w[r * D + c] = g_v[r] * agg[c];
      g_agg[c] += head_w[r * D + c] * g_v[r];
    }
  }

  for (const char* name :
       {"agg.fc.weight", "agg.fc.bias", "agg.conv_nuc.weight", "agg.conv_nuc.bias",
        "agg.conv_elec.weight", "agg.conv_elec.bias", "agg.norm_elec.scale",
        "agg.norm_elec.shift", "agg.norm_out.scale", "agg.norm_out.shift"}) {
    auto g = grad_of(store, grad, name);
    std::fill(g.begin(), g.end(), 0.0);
  }

  // (h)
  for (double& g : g_agg) g *= amp_r;
  std::vector<double> g_s(D);
  layer_norm_backward(scache, no_s, g_agg, grad_of(store, grad, "agg.norm_out.scale"),
                      grad_of(store, grad, "agg.norm_out.shift"), g_s);
  // (g)
  std::vector<double> g_u(std::size_t(n) * D);
  pool_backward(u, n, D, ce_w, g_s, grad_of(store, grad, "agg.conv_elec.weight"),
                grad_of(store, grad, "agg.conv_elec.bias"), g_u);
  // (f), (e)
  std::vector<double> g_q(std::size_t(n) * m * D);
  auto gne_s = grad_of(store, grad, "agg.norm_elec.scale");
  auto gne_b = grad_of(store, grad, "agg.norm_elec.shift");
  auto gcn_w = grad_of(store, grad, "agg.conv_nuc.weight");
  auto gcn_b = grad_of(store, grad, "agg.conv_nuc.bias");
  std::vector<double> g_w(D);
  for (int i = 0; i < n; ++i) {
    auto gui = std::span<double>(g_u).subspan(std::size_t(i) * D, D);
    const double amp = std::exp(-r_e[i]);
    for (double& g : gui) g *= amp;
    layer_norm_backward(ncache[i], ne_s, gui, gne_s, gne_b, g_w);
    const auto qi = std::span<const double>(q).subspan(std::size_t(i) * m * D, std::size_t(m) * D);
    pool_backward(qi, m, D, cn_w, g_w, gcn_w, gcn_b,
                  std::span<double>(g_q).subspan(std::size_t(i) * m * D, std::size_t(m) * D));
  }
  // (d)
  auto gfc_w = grad_of(store, grad, "agg.fc.weight");
  auto gfc_b = grad_of(store, grad, "agg.fc.bias");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double* go = &g_q[(std::size_t(i) * m + j) * D];
      for (int o = 0; o < D; ++o) {
        gfc_b[o] += go[o];
        for (int k = 0; k < d; ++k) gfc_w[std::size_t(o) * d + k] += go[o] * yamp(i, j, k);
      }
    }
  }
  return energy;
}

double forward_impl(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                    const ParamStore& store, const ModelConfig& cfg, std::span<double> grad,
                    ForwardInfo* info) {
  cfg.validate();
  const auto tok = tokenize(mol, r, store, cfg);
  BlockDiagnostics diag;
  const auto y = run_layers(tok.tokens, mol, store, cfg, &diag);
  const auto r_en = updated_distances(y, tok, store);
  const auto yamp = amplify(y, r_en, mol.proton_numbers());
  const double e = downstream(yamp, r_en, store, cfg, mol.name(), h, grad);
  if (!std::isfinite(e)) throw NumericalError("energy is not finite");
  if (info) {
    info->energy = e;
    info->discarded_mass = diag.discarded_mass;
  }
  return e;
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Quantum ? "quantum" : "classical";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "quantum") return ModelKind::Quantum;
  if (name == "classical") return ModelKind::Classical;
  throw std::invalid_argument(fmt::format("unknown model kind {}", name));
}

void ModelConfig::validate() const {
  if (d_emb < 4) {
    throw DimensionError(fmt::format("d_emb must be at least 4, got {}", d_emb));
  }
  if (layers < 0) throw DimensionError("layers must be non-negative");
  if (max_electron_id < 1) throw DimensionError("max_electron_id must be positive");
}

void init_params(ParamStore& store, const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  const std::size_t d = cfg.d_emb;
  const std::size_t D = 2 * d;
  const std::size_t ids = cfg.max_electron_id;
  const auto up = ParamGroup::Upstream;
  const auto down = ParamGroup::Downstream;

  fill_dense(store.add("tokenizer.electron_embed", {ids, 3}, up), rng, ids);
  fill_dense(store.add("tokenizer.w_en", {d, 4}, up), rng, 4);
  for (int l = 0; l < cfg.layers; ++l) {
    if (cfg.kind == ModelKind::Quantum) {
      init_quantum_layer(store, l, d, rng);
    } else {
      init_classical_layer(store, l, d, rng);
    }
  }
  fill_dense(store.add("agg.fc.weight", {D, d}, down), rng, d);
  fill_dense(store.add("agg.fc.bias", {D}, down), rng, d);
  fill_dense(store.add("agg.conv_nuc.weight", {D, D, 2}, down), rng, 2 * D);
  fill_dense(store.add("agg.conv_nuc.bias", {D}, down), rng, 2 * D);
  add_norm(store, "agg.norm_elec", D, down);
  fill_dense(store.add("agg.conv_elec.weight", {D, D, 2}, down), rng, 2 * D);
  fill_dense(store.add("agg.conv_elec.bias", {D}, down), rng, 2 * D);
  add_norm(store, "agg.norm_out", D, down);
}

std::string head_weight_name(const std::string& molecule) {
  return fmt::format("head.{}.weight", molecule);
}
std::string head_bias_name(const std::string& molecule) {
  return fmt::format("head.{}.bias", molecule);
}

void add_head(ParamStore& store, const ModelConfig& cfg, const std::string& molecule,
              int n_qubits) {
  if (n_qubits < 1 || n_qubits > 16) {
    throw DimensionError(fmt::format("head for {} qubits outside [1, 16]", n_qubits));
  }
  const std::size_t rows = std::size_t{1} << n_qubits;
  const std::size_t cols = 2 * static_cast<std::size_t>(cfg.d_emb);
  const auto wn = head_weight_name(molecule);
  if (store.contains(wn)) {
    const auto& shape = store.info(wn).shape;
    if (shape != std::vector<std::size_t>{rows, cols}) {
      throw DimensionError(fmt::format("head {} has an incompatible shape", wn));
    }
    return;
  }
  store.add(wn, {rows, cols}, ParamGroup::Downstream);
  store.add(head_bias_name(molecule), {rows}, ParamGroup::Downstream);
}

Tokenized tokenize(const MoleculeSpec& mol, double r, const ParamStore& store,
                   const ModelConfig& cfg) {
  if (!(r > 0.0)) throw DimensionError(fmt::format("bond length must be positive, got {}", r));
  const int n = mol.electrons(), m = mol.nucleus_count(), d = cfg.d_emb;
  if (mol.max_electron_id() > cfg.max_electron_id) {
    throw DimensionError(fmt::format("electron id {} exceeds the embedding table size {}",
                                     mol.max_electron_id(), cfg.max_electron_id));
  }
  const auto R = mol.positions(r);
  const auto embed = store.get("tokenizer.electron_embed");
  const auto w_en = store.get("tokenizer.w_en");

  Tokenized out;
  out.tokens = TokenTensor(n, m, d);
  out.features.resize(std::size_t(n) * m * 4);
  out.p_en_in.resize(std::size_t(n) * m * 3);
  out.r_en_in.resize(std::size_t(n) * m);
  for (int i = 0; i < n; ++i) {
    const int a = mol.electron_atoms()[i];
    const int id = mol.electron_ids()[i];
    Vec3 pos;
    for (int c = 0; c < 3; ++c) pos[c] = R[a][c] + embed[std::size_t(id - 1) * 3 + c];
    for (int j = 0; j < m; ++j) {
      const std::size_t t = std::size_t(i) * m + j;
      double norm2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double p = R[j][c] - pos[c];
        out.p_en_in[t * 3 + c] = p;
        out.features[t * 4 + c] = p;
        norm2 += p * p;
      }
      out.r_en_in[t] = std::sqrt(norm2);
      out.features[t * 4 + 3] = out.r_en_in[t];
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += w_en[std::size_t(k) * 4 + c] * out.features[t * 4 + c];
        out.tokens(i, j, k) = acc;
      }
    }
  }
  return out;
}

AttentionParams attention_params(const ParamStore& store, int layer, int d) {
  const std::string p = fmt::format("layer{}", layer);
  AttentionParams a;
  a.d = d;
  a.query = store.get(p + ".query");
  a.key = store.get(p + ".key");
  a.value = store.get(p + ".value");
  a.mps = store.get(p + ".mps");
  return a;
}

void layer_norm(std::span<const double> x, std::span<const double> scale,
                std::span<const double> shift, std::span<double> out) {
  if (scale.size() != x.size() || shift.size() != x.size() || out.size() != x.size()) {
    throw DimensionError("layer_norm size mismatch");
  }
  layer_norm_cached(x, scale, shift, out, nullptr);
}

TokenTensor residual_normalize(const TokenTensor& in, const TokenTensor& block_out,
                               const ParamStore& store, int layer) {
  const std::string p = fmt::format("layer{}.norm", layer);
  const auto scale = store.get(p + ".scale");
  const auto shift = store.get(p + ".shift");
  const int d = in.d();
  TokenTensor out(in.n(), in.m(), d);
  std::vector<double> sum(d);
  for (int i = 0; i < in.n(); ++i) {
    for (int j = 0; j < in.m(); ++j) {
      for (int k = 0; k < d; ++k) sum[k] = in(i, j, k) + block_out(i, j, k);
      layer_norm_cached(sum, scale, shift, std::span<double>(&out(i, j, 0), d), nullptr);
    }
  }
  return out;
}

TokenTensor qt_layer(const TokenTensor& in, const ParamStore& store, int layer,
                     std::span<const double> proton_numbers, const ModelConfig& cfg,
                     BlockDiagnostics* diag) {
  const int n = in.n(), m = in.m(), d = in.d();
  if (static_cast<int>(proton_numbers.size()) != m) {
    throw DimensionError("one proton number per nucleus is required");
  }
  const auto ap = attention_params(store, layer, d);
  TokenTensor angles(n, m, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < d; ++k)
        angles(i, j, k) = std::acos(std::tanh(proton_numbers[j] * in(i, j, k)));

  TokenTensor block(n, m, d);
  for (int i = 0; i < n; ++i) {
    const auto z = token_block_forward(angles.block(i), m, ap, cfg.max_branches, diag);
    std::copy(z.begin(), z.end(), block.block(i).begin());
  }
  return residual_normalize(in, block, store, layer);
}

TokenTensor run_layers(const TokenTensor& tokens, const MoleculeSpec& mol,
                       const ParamStore& store, const ModelConfig& cfg, BlockDiagnostics* diag) {
  const auto np = mol.proton_numbers();
  TokenTensor y = tokens;
  for (int l = 0; l < cfg.layers; ++l) {
    y = cfg.kind == ModelKind::Quantum ? qt_layer(y, store, l, np, cfg, diag)
                                       : classical_layer(y, store, l);
  }
  return y;
}

std::vector<double> invert_tokenizer(const TokenTensor& y, std::span<const double> w_en) {
  const int d = y.d();
  if (w_en.size() != std::size_t(d) * 4) throw DimensionError("W_en must be d_emb x 4");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>> W(w_en.data(), d,
                                                                              4);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double lo = sv.size() == 4 ? sv[3] : 0.0;
  const double hi = sv.size() > 0 ? sv[0] : 0.0;
  if (!(lo > 0.0) || hi / lo > 1e8) {
    throw NumericalError(fmt::format("W_en is singular (condition number {:.3g})",
                                     lo > 0.0 ? hi / lo : INFINITY));
  }
  const Eigen::Matrix<double, 4, Eigen::Dynamic> pinv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  std::vector<double> out(std::size_t(y.n()) * y.m() * 4);
  for (int i = 0; i < y.n(); ++i) {
    for (int j = 0; j < y.m(); ++j) {
      Eigen::Map<const Eigen::VectorXd> yv(y.token(i, j), d);
      Eigen::Map<Eigen::Vector4d> xv(&out[(std::size_t(i) * y.m() + j) * 4]);
      xv = pinv * yv;
    }
  }
  return out;
}

std::vector<double> moment_match(std::span<const double> r_out, std::span<const double> r_in) {
  if (r_out.size() != r_in.size() || r_in.empty()) {
    throw DimensionError("moment_match needs equally sized, non-empty inputs");
  }
  auto moments = [](std::span<const double> a) {
    double mu = 0.0;
    for (double v : a) mu += v;
    mu /= static_cast<double>(a.size());
    double var = 0.0;
    for (double v : a) var += (v - mu) * (v - mu);
    return std::pair{mu, std::sqrt(var / static_cast<double>(a.size()))};
  };
  const auto [mu_out, sd_out] = moments(r_out);
  const auto [mu_in, sd_in] = moments(r_in);
  if (sd_out < 1e-12) throw NumericalError("recovered distances have degenerate spread");
  std::vector<double> out(r_out.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = sd_in * (r_out[t] - mu_out) / sd_out + mu_in;
  }
  return out;
}

TokenTensor amplify(const TokenTensor& y, std::span<const double> r_en,
                    std::span<const double> proton_numbers) {
  if (r_en.size() != std::size_t(y.n()) * y.m() ||
      proton_numbers.size() != static_cast<std::size_t>(y.m())) {
    throw DimensionError("amplify shape mismatch");
  }
  TokenTensor out = y;
  for (int i = 0; i < y.n(); ++i) {
    for (int j = 0; j < y.m(); ++j) {
      const double f = std::exp(-r_en[std::size_t(i) * y.m() + j]) * proton_numbers[j];
      for (int k = 0; k < y.d(); ++k) out(i, j, k) *= f;
    }
  }
  return out;
}

std::vector<double> updated_distances(const TokenTensor& y, const Tokenized& tok,
                                      const ParamStore& store) {
  const auto x = invert_tokenizer(y, store.get("tokenizer.w_en"));
  std::vector<double> r_out(tok.r_en_in.size());
  for (std::size_t t = 0; t < r_out.size(); ++t) r_out[t] = x[t * 4 + 3];
  return moment_match(r_out, tok.r_en_in);
}

std::vector<double> aggregate(const TokenTensor& y, const Tokenized& tok,
                              std::span<const double> proton_numbers, const ParamStore& store,
                              const ModelConfig& cfg) {
  const int n = y.n(), m = y.m(), d = y.d(), D = 2 * d;
  (void)cfg;
  const auto r_en = updated_distances(y, tok, store);
  const auto yamp = amplify(y, r_en, proton_numbers);
  const auto fc_w = store.get("agg.fc.weight");
  const auto fc_b = store.get("agg.fc.bias");
  std::vector<double> q(std::size_t(n) * m * D);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int o = 0; o < D; ++o) {
        double acc = fc_b[o];
        for (int k = 0; k < d; ++k) acc += fc_w[std::size_t(o) * d + k] * yamp(i, j, k);
        q[(std::size_t(i) * m + j) * D + o] = acc;
      }
  std::vector<double> u(std::size_t(n) * D);
  double rbar = 0.0;
  for (int i = 0; i < n; ++i) {
    double r_e = 0.0;
    for (int j = 0; j < m; ++j) r_e += r_en[std::size_t(i) * m + j] / m;
    rbar += r_e / n;
    const auto wi = pool_forward(
        std::span<const double>(q).subspan(std::size_t(i) * m * D, std::size_t(m) * D), m, D,
        store.get("agg.conv_nuc.weight"), store.get("agg.conv_nuc.bias"));
    auto ui = std::span<double>(u).subspan(std::size_t(i) * D, D);
    layer_norm_cached(wi, store.get("agg.norm_elec.scale"), store.get("agg.norm_elec.shift"), ui,
                      nullptr);
    for (double& v : ui) v *= std::exp(-r_e);
  }
  const auto s = pool_forward(u, n, D, store.get("agg.conv_elec.weight"),
                              store.get("agg.conv_elec.bias"));
  std::vector<double> agg(D);
  layer_norm_cached(s, store.get("agg.norm_out.scale"), store.get("agg.norm_out.shift"), agg,
                    nullptr);
  for (double& v : agg) v *= std::exp(-rbar);
  return agg;
}

std::vector<double> head_amplitudes(std::span<const double> agg, const ParamStore& store,
                                    const std::string& molecule, const QubitHamiltonian& h) {
  const auto wn = head_weight_name(molecule);
  if (!store.contains(wn)) throw DimensionError(fmt::format("no head named {}", wn));
  const auto w = store.get(wn);
  const auto b = store.get(head_bias_name(molecule));
  const std::size_t rows = h.dim();
  const std::size_t cols = agg.size();
  if (w.size() != rows * cols) {
    throw DimensionError(fmt::format("head {} does not map {} features to {} amplitudes", wn,
                                     cols, rows));
  }
  std::vector<double> v(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    for (std::size_t c = 0; c < cols; ++c) acc += w[r * cols + c] * agg[c];
    v[r] = acc;
  }
  v[h.hf_index()] += 1.0;
  return v;
}

StateVector assemble_state(std::span<const double> agg, const ParamStore& store,
                           const std::string& molecule, const QubitHamiltonian& h) {
  const auto v = head_amplitudes(agg, store, molecule, h);
  double vv = 0.0;
  for (double a : v) vv += a * a;
  if (vv < 1e-24) throw NumericalError("assembled state has norm below 1e-12");
  std::vector<cplx> amps(v.size());
  const double inv = 1.0 / std::sqrt(vv);
  for (std::size_t i = 0; i < v.size(); ++i) amps[i] = v[i] * inv;
  return StateVector::from_amplitudes(std::move(amps));
}

double energy_forward(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                      const ParamStore& store, const ModelConfig& cfg, ForwardInfo* info) {
  return forward_impl(mol, r, h, store, cfg, {}, info);
}

double energy_downstream_grad(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                              const ParamStore& store, const ModelConfig& cfg,
                              std::span<double> grad, ForwardInfo* info) {
  if (grad.size() != store.size()) throw DimensionError("gradient buffer size mismatch");
  return forward_impl(mol, r, h, store, cfg, grad, info);
}

}  // namespace mqt
