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

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mqt/model.hpp"

namespace mqt {

enum class GradMode { FdCentral, Spsa };

std::string to_string(GradMode mode);
/// Accepts "fd", "fd-central" and "spsa".
GradMode parse_grad_mode(const std::string& name);

/// Scalar objective over a full flat parameter vector. Must be safe to call
/// concurrently.
using Objective = std::function<double(std::span<const double>)>;

/// (f(x + h e_i) - f(x - h e_i)) / 2h for every i in `coords`, written to
/// grad[i]. Coordinates are split over `threads` workers; every result lands
/// in its own slot so the output does not depend on the thread count.
void fd_central(const Objective& f, std::span<const double> x,
                std::span<const std::size_t> coords, double h, std::span<double> grad,
                int threads = 1);

/// One simultaneous perturbation x +- c Delta with Rademacher Delta over
/// `coords`; grad[i] = (f+ - f-) / (2 c Delta_i).
void spsa(const Objective& f, std::span<const double> x, std::span<const std::size_t> coords,
          double c, std::mt19937_64& rng, std::span<double> grad);

struct GradientReport {
  double energy = 0.0;
  double norm_upstream = 0.0;
  double norm_downstream = 0.0;
  double discarded_mass = 0.0;
};

/// Analytic gradient for downstream tensors plus fd-central or SPSA for
/// upstream tensors, both through energy_forward. `grad` is overwritten in
/// full; tensors that do not influence this molecule get zero.
GradientReport composite_gradient(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                                  const ParamStore& store, const ModelConfig& cfg,
                                  GradMode mode, double step, std::mt19937_64& rng,
                                  std::span<double> grad, int threads = 1);

/// Worker count used when a caller passes threads <= 0.
int default_threads();

}  // namespace mqt
