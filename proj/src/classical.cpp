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

#include <cmath>

#include <fmt/format.h>

#include "mqt/errors.hpp"
#include "mqt/model.hpp"

namespace mqt {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_matrix(const ParamStore& store, const std::string& name) {
  const auto& info = store.info(name);
  if (info.shape.size() != 2) throw DimensionError(fmt::format("{} is not a matrix", name));
  return Eigen::Map<const RowMat>(store.get(name).data(),
                                  static_cast<Eigen::Index>(info.shape[0]),
                                  static_cast<Eigen::Index>(info.shape[1]));
}

Eigen::Map<const Eigen::RowVectorXd> as_row(const ParamStore& store, const std::string& name) {
  const auto v = store.get(name);
  return Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

RowMat norm_rows(const RowMat& x, const ParamStore& store, const std::string& prefix) {
  const auto scale = store.get(prefix + ".scale");
  const auto shift = store.get(prefix + ".shift");
  RowMat out(x.rows(), x.cols());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    layer_norm(std::span<const double>(x.row(t).data(), x.cols()), scale, shift,
               std::span<double>(out.row(t).data(), out.cols()));
  }
  return out;
}

}  // namespace

TokenTensor classical_layer(const TokenTensor& in, const ParamStore& store, int layer,
                            ClassicalTrace* trace) {
  const std::string p = fmt::format("layer{}", layer);
  const int m = in.m(), d = in.d();
  const auto wq = as_matrix(store, p + ".wq");
  const auto wk = as_matrix(store, p + ".wk");
  const auto wv = as_matrix(store, p + ".wv");
  const auto wo = as_matrix(store, p + ".wo");
  const auto w1 = as_matrix(store, p + ".ffn.w1");
  const auto b1 = as_row(store, p + ".ffn.b1");
  const auto w2 = as_matrix(store, p + ".ffn.w2");
  const auto b2 = as_row(store, p + ".ffn.b2");
  if (wq.rows() != d || w1.rows() != d || w2.cols() != d) {
    throw DimensionError(fmt::format("{} weights do not match d_emb {}", p, d));
  }
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(d));

  TokenTensor out(in.n(), m, d);
  if (trace) trace->attention.clear();
  for (int i = 0; i < in.n(); ++i) {
    const Eigen::Map<const RowMat> z(in.block(i).data(), m, d);
    const RowMat zhat = norm_rows(z, store, p + ".ln1");
    const RowMat q = zhat * wq;
    const RowMat k = zhat * wk;
    const RowMat v = zhat * wv;

    RowMat scores = (q * k.transpose()) * inv_sqrt_dk;
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      const double mx = scores.row(r).maxCoeff();
      scores.row(r) = (scores.row(r).array() - mx).exp();
      scores.row(r) /= scores.row(r).sum();
    }
    if (trace) trace->attention.push_back(scores);

    const RowMat attended = (scores * v) * wo;
    const RowMat z2 = norm_rows(z + attended, store, p + ".ln2");
    RowMat hidden = (z2 * w1).rowwise() + b1;
    hidden = hidden.array().tanh();
    const RowMat ffn = (hidden * w2).rowwise() + b2;
    const RowMat z3 = norm_rows(z2 + ffn, store, p + ".ln3");

    Eigen::Map<RowMat>(out.block(i).data(), m, d) = z3;
  }
  return out;
}

}  // namespace mqt
