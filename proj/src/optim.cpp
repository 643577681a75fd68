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

#include "mqt/optim.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

void adamw_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                double lr, double wd, const std::vector<bool>* decay_mask,
                const AdamHyper& hyper) {
  const std::size_t n = params.size();
  if (grads.size() != n) {
    throw DimensionError(fmt::format("{} gradients for {} parameters", grads.size(), n));
  }
  if (decay_mask && decay_mask->size() != n) throw DimensionError("decay mask size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericalError(fmt::format("non-finite gradient at coordinate {} (step {})", i,
                                       state.t + 1));
    }
  }
  if (state.m.empty()) {
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
  }
  if (state.m.size() != n || state.v.size() != n) {
    throw DimensionError("optimizer state does not match the parameter count");
  }

  ++state.t;
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < n; ++i) {
    if (!decay_mask || (*decay_mask)[i]) params[i] -= lr * wd * params[i];
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + hyper.eps);
  }
}

}  // namespace mqt
