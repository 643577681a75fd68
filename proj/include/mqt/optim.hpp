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
#include <vector>

namespace mqt {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// AdamW: p <- p - lr*wd*p for coordinates with decay enabled, then the
/// bias-corrected Adam step. Throws NumericalError naming the first
/// non-finite gradient coordinate; params are left untouched in that case.
void adamw_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                double lr, double wd, const std::vector<bool>* decay_mask = nullptr,
                const AdamHyper& hyper = {});

}  // namespace mqt
