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

#include "mqt/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
}

double sample_open(std::mt19937_64& rng, double lo, double hi) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return lo + (hi - lo) * u;
  }
}

std::size_t rd_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate", "must be positive");
  if (weight_decay < 0.0) throw ConfigError("weight_decay", "must be non-negative");
  if (iterations < 0) throw ConfigError("iterations", "must be non-negative");
  if (!(bond_lo < bond_hi)) throw ConfigError("bond_range", "lower bound must be below upper");
  if (bond_lo < 0.0 || bond_hi > 5.0) throw ConfigError("bond_range", "must lie within [0, 5]");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step", "must be positive");
  if (molecules.empty()) throw ConfigError("molecules", "must name at least one molecule");
  if (!(snap_step > 0.0)) throw ConfigError("snap_step", "must be positive");
  for (std::size_t i = 0; i < fewshot_bonds.size(); ++i) {
    if (!(fewshot_bonds[i] > 0.0) || fewshot_bonds[i] > 5.0) {
      throw ConfigError(fmt::format("fewshot_bonds[{}]", i), "must lie in (0, 5]");
    }
  }
  try {
    model_config().validate();
  } catch (const DimensionError& e) {
    throw ConfigError("model", e.what());
  }
}

ModelConfig TrainConfig::model_config() const {
  ModelConfig m = model;
  m.max_branches = max_branches;
  return m;
}

const char* RunRecord::csv_header() {
  return "iteration,molecule,r,r_grid,energy,grad_norm_upstream,grad_norm_downstream,"
         "discarded_mass";
}

const char* RunRecord::timing_header() { return "iteration,wall_seconds"; }

std::string RunRecord::csv() const {
  std::string out = csv_header();
  out += '\n';
  for (const auto& row : rows) {
    out += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.iteration,
                       row.molecule, row.r, row.r_grid, row.energy, row.grad_norm_upstream,
                       row.grad_norm_downstream, row.discarded_mass);
  }
  out += fmt::format("# final_checksum={:016x}\n", final_checksum);
  return out;
}

void RunRecord::write_csv(const std::filesystem::path& path) const { write_text(path, csv()); }

void RunRecord::write_timing_csv(const std::filesystem::path& path) const {
  std::string out = timing_header();
  out += '\n';
  for (const auto& row : rows) out += fmt::format("{},{:.6f}\n", row.iteration, row.wall_seconds);
  write_text(path, out);
}

MoleculeSpec resolve_molecule(const Dataset& data, const std::string& name) {
  if (!data.has(name)) throw DataError(fmt::format("dataset has no files for {}", name));
  const auto& entries = data.entries(name);
  const auto mol = MoleculeSpec::from_dataset(entries.front().hamiltonian);
  for (const auto& e : entries) {
    if (e.bond_length() > 0.0 && e.bond_length() <= 5.0) mol.check_consistent(e.hamiltonian);
  }
  return mol;
}

void check_compatible(const ParamStore& store, const ModelConfig& cfg) {
  const std::vector<std::size_t> w_shape{std::size_t(cfg.d_emb), 4};
  if (!store.contains("tokenizer.w_en") || store.info("tokenizer.w_en").shape != w_shape) {
    throw DimensionError(fmt::format("parameters were not built for d_emb = {}", cfg.d_emb));
  }
  const char* probe = cfg.kind == ModelKind::Quantum ? "norm.scale" : "ln1.scale";
  for (int l = 0; l < cfg.layers; ++l) {
    if (!store.contains(fmt::format("layer{}.{}", l, probe))) {
      throw DimensionError(fmt::format("parameters lack {} layer {}", to_string(cfg.kind), l));
    }
  }
  if (store.contains(fmt::format("layer{}.norm.scale", cfg.layers)) ||
      store.contains(fmt::format("layer{}.ln1.scale", cfg.layers))) {
    throw DimensionError(fmt::format("parameters hold more than {} layers", cfg.layers));
  }
}

TrainState initial_state(const TrainConfig& cfg, const std::vector<MoleculeSpec>& mols) {
  cfg.validate();
  const auto model = cfg.model_config();
  TrainState st;
  init_params(st.params, model, cfg.seed);
  for (const auto& mol : mols) add_head(st.params, model, mol.name(), mol.qubits());
  // Sampling stream is decoupled from the initialization stream.
  st.rng.seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  return st;
}

void run_iterations(TrainState& state, const TrainConfig& cfg, const Dataset& data,
                    const std::vector<MoleculeSpec>& mols, Sampling sampling,
                    const TrainHooks* hooks) {
  cfg.validate();
  if (mols.empty()) throw ConfigError("molecules", "must name at least one molecule");
  if (sampling == Sampling::FewShot && cfg.fewshot_bonds.empty()) {
    throw ConfigError("fewshot_bonds", "fine-tuning needs at least one bond length");
  }
  const auto model = cfg.model_config();
  check_compatible(state.params, model);
  const auto decay = state.params.decay_mask();
  std::vector<double> grad(state.params.size());

  for (; state.iteration < cfg.iterations;) {
    const auto start = std::chrono::steady_clock::now();
    const int t = state.iteration;
    const auto& mol = mols[std::size_t(t) % mols.size()];
    double r;
    const DatasetEntry* entry;
    if (sampling == Sampling::FewShot) {
      r = cfg.fewshot_bonds[rd_index(state.rng, cfg.fewshot_bonds.size())];
      entry = &data.exact(mol.name(), r);
    } else {
      r = sample_open(state.rng, cfg.bond_lo, cfg.bond_hi);
      entry = &data.snapped(mol.name(), r, cfg.snap_step);
    }
    const auto rep =
        composite_gradient(mol, r, entry->hamiltonian, state.params, model, cfg.grad_mode,
                           cfg.fd_step, state.rng, grad, cfg.threads);
    adamw_step(state.params.values(), grad, state.adam, cfg.learning_rate, cfg.weight_decay,
               &decay);

    IterationRecord row;
    row.iteration = t;
    row.molecule = mol.name();
    row.r = r;
    row.r_grid = entry->bond_length();
    row.energy = rep.energy;
    row.grad_norm_upstream = rep.norm_upstream;
    row.grad_norm_downstream = rep.norm_downstream;
    row.discarded_mass = rep.discarded_mass;
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    state.record.rows.push_back(std::move(row));
    ++state.iteration;
    state.record.final_checksum = state.params.checksum();
    if (hooks && hooks->every > 0 && hooks->on_checkpoint && state.iteration % hooks->every == 0) {
      hooks->on_checkpoint(state);
    }
  }
  state.record.final_checksum = state.params.checksum();
}

TrainState pretrain(const std::vector<MoleculeSpec>& mols, const TrainConfig& cfg,
                    const Dataset& data, const TrainHooks* hooks) {
  auto st = initial_state(cfg, mols);
  run_iterations(st, cfg, data, mols, Sampling::BondRange, hooks);
  return st;
}

TrainState train_plain(const MoleculeSpec& mol, const TrainConfig& cfg, const Dataset& data,
                       const TrainHooks* hooks) {
  return pretrain({mol}, cfg, data, hooks);
}

TrainState finetune(const ParamStore& params, const MoleculeSpec& mol, const TrainConfig& cfg,
                    const Dataset& data, const TrainHooks* hooks) {
  cfg.validate();
  if (cfg.fewshot_bonds.empty()) {
    throw ConfigError("fewshot_bonds", "fine-tuning needs at least one bond length");
  }
  const auto model = cfg.model_config();
  check_compatible(params, model);
  TrainState st;
  st.params = params;
  add_head(st.params, model, mol.name(), mol.qubits());
  st.rng.seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  run_iterations(st, cfg, data, {mol}, Sampling::FewShot, hooks);
  return st;
}

const char* PecResult::csv_header() { return "r,energy,exact,delta"; }

void PecResult::write_csv(const std::filesystem::path& path) const {
  std::string out = csv_header();
  out += '\n';
  for (const auto& row : rows) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", row.r, row.energy, row.exact,
                       row.delta);
  }
  out += fmt::format("# mean_abs_delta={:.17g}\n", mean_abs_delta);
  write_text(path, out);
}

std::vector<double> default_sweep_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 49; ++i) g.push_back(i / 10.0);
  return g;
}

double exact_energy(const DatasetEntry& entry) {
  static std::mutex mu;
  static std::map<std::string, double> cache;
  const std::string key = fmt::format("{}#{:016x}", entry.path.string(), entry.checksum);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double e = ground_energy(entry.hamiltonian);
  std::lock_guard lock(mu);
  cache.emplace(key, e);
  return e;
}

PecResult sweep_pec(const ParamStore& params, const MoleculeSpec& mol,
                    const std::vector<double>& grid, const Dataset& data,
                    const ModelConfig& cfg) {
  if (grid.empty()) throw DataError("sweep grid is empty");
  std::vector<const DatasetEntry*> entries;
  std::vector<std::string> missing;
  for (double r : grid) {
    try {
      entries.push_back(&data.exact(mol.name(), r));
    } catch (const DataError&) {
      missing.push_back(fmt::format("{}", r));
    }
  }
  if (!missing.empty()) {
    throw DataError(fmt::format("{}: no dataset file at r = {}", mol.name(),
                                fmt::join(missing, ", ")));
  }
  PecResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PecRow row;
    row.r = grid[i];
    row.energy = energy_forward(mol, grid[i], entries[i]->hamiltonian, params, cfg);
    row.exact = exact_energy(*entries[i]);
    row.delta = row.energy - row.exact;
    out.mean_abs_delta += std::abs(row.delta);
    out.rows.push_back(row);
  }
  out.mean_abs_delta /= static_cast<double>(out.rows.size());
  return out;
}

PecResult zero_shot_eval(const ParamStore& params, const MoleculeSpec& mol,
                         const std::vector<double>& grid, const Dataset& data,
                         const ModelConfig& cfg) {
  ParamStore local = params;
  add_head(local, cfg, mol.name(), mol.qubits());
  return sweep_pec(local, mol, grid, data, cfg);
}

}  // namespace mqt
