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

#include "mqt/gradient.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

std::string to_string(GradMode mode) { return mode == GradMode::Spsa ? "spsa" : "fd"; }

GradMode parse_grad_mode(const std::string& name) {
  if (name == "fd" || name == "fd-central") return GradMode::FdCentral;
  if (name == "spsa") return GradMode::Spsa;
  throw std::invalid_argument(fmt::format("unknown gradient mode {}", name));
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void fd_central(const Objective& f, std::span<const double> x,
                std::span<const std::size_t> coords, double h, std::span<double> grad,
                int threads) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (grad.size() != x.size()) throw DimensionError("gradient buffer size mismatch");
  if (threads <= 0) threads = default_threads();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(coords.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    std::vector<double> probe(x.begin(), x.end());
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= coords.size()) return;
      const std::size_t i = coords[t];
      try {
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(coords.size());
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

void spsa(const Objective& f, std::span<const double> x, std::span<const std::size_t> coords,
          double c, std::mt19937_64& rng, std::span<double> grad) {
  if (!(c > 0.0)) throw std::invalid_argument("SPSA perturbation must be positive");
  if (grad.size() != x.size()) throw DimensionError("gradient buffer size mismatch");
  std::vector<double> delta(coords.size());
  for (double& v : delta) v = (rng() >> 63) ? 1.0 : -1.0;
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t t = 0; t < coords.size(); ++t) {
    plus[coords[t]] += c * delta[t];
    minus[coords[t]] -= c * delta[t];
  }
  const double diff = (f(plus) - f(minus)) / (2.0 * c);
  for (std::size_t t = 0; t < coords.size(); ++t) grad[coords[t]] = diff * delta[t];
}

GradientReport composite_gradient(const MoleculeSpec& mol, double r, const QubitHamiltonian& h,
                                  const ParamStore& store, const ModelConfig& cfg,
                                  GradMode mode, double step, std::mt19937_64& rng,
                                  std::span<double> grad, int threads) {
  if (grad.size() != store.size()) throw DimensionError("gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  GradientReport rep;
  ForwardInfo info;
  rep.energy = energy_downstream_grad(mol, r, h, store, cfg, grad, &info);
  rep.discarded_mass = info.discarded_mass;

  const Objective f = [&](std::span<const double> x) {
    ParamStore probe = store;
    std::copy(x.begin(), x.end(), probe.values().begin());
    return energy_forward(mol, r, h, probe, cfg);
  };
  const auto up = store.indices(ParamGroup::Upstream);
  if (mode == GradMode::FdCentral) {
    fd_central(f, store.values(), up, step, grad, threads);
  } else {
    spsa(f, store.values(), up, step, rng, grad);
  }

  for (std::size_t i : up) rep.norm_upstream += grad[i] * grad[i];
  for (std::size_t i : store.indices(ParamGroup::Downstream)) {
    rep.norm_downstream += grad[i] * grad[i];
  }
  rep.norm_upstream = std::sqrt(rep.norm_upstream);
  rep.norm_downstream = std::sqrt(rep.norm_downstream);
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalError("gradient contains non-finite entries");
  }
  return rep;
}

}  // namespace mqt
