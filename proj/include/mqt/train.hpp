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
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mqt/dataset.hpp"
#include "mqt/gradient.hpp"
#include "mqt/model.hpp"
#include "mqt/optim.hpp"

namespace mqt {

struct TrainConfig {
  double learning_rate = 0.004;
  double weight_decay = 0.001;
  int iterations = 500;
  /// Bond lengths are drawn uniformly from the open interval (lo, hi).
  double bond_lo = 0.0;
  double bond_hi = 5.0;
  std::uint64_t seed = 0;
  GradMode grad_mode = GradMode::Spsa;
  double fd_step = 1e-4;
  int max_branches = 4;
  std::vector<std::string> molecules{"H2"};
  std::vector<double> fewshot_bonds{0.5, 1.5, 2.5, 3.5, 4.5};
  /// Model shape. Its max_branches is replaced by the field above.
  ModelConfig model;
  /// Hamiltonian grid spacing used to snap sampled bond lengths.
  double snap_step = 0.05;
  /// Gradient workers; <= 0 uses every hardware thread.
  int threads = 1;

  void validate() const;
  ModelConfig model_config() const;
};

struct IterationRecord {
  int iteration = 0;
  std::string molecule;
  double r = 0.0;
  double r_grid = 0.0;
  double energy = 0.0;
  double grad_norm_upstream = 0.0;
  double grad_norm_downstream = 0.0;
  double discarded_mass = 0.0;
  double wall_seconds = 0.0;
};

/// Append-only per-iteration trace. The main CSV omits wall time so that a
/// fixed-seed fd-central run reproduces it byte for byte; timing goes to a
/// separate file.
struct RunRecord {
  std::vector<IterationRecord> rows;
  std::uint64_t final_checksum = 0;

  static const char* csv_header();
  static const char* timing_header();
  void write_csv(const std::filesystem::path& path) const;
  void write_timing_csv(const std::filesystem::path& path) const;
  std::string csv() const;
};

struct TrainState {
  ParamStore params;
  AdamState adam;
  std::mt19937_64 rng;
  int iteration = 0;
  RunRecord record;
};

enum class Sampling { BondRange, FewShot };

struct TrainHooks {
  /// Called after every `every` completed iterations (0 disables).
  int every = 0;
  std::function<void(const TrainState&)> on_checkpoint;
};

/// Molecule geometry and identifiers read from the dataset; every file of the
/// molecule must agree with it.
MoleculeSpec resolve_molecule(const Dataset& data, const std::string& name);

/// Throws DimensionError when the store was built for a different d_emb,
/// layer count or layer kind.
void check_compatible(const ParamStore& store, const ModelConfig& cfg);

/// Fresh parameters from cfg.seed plus one zero head per molecule.
TrainState initial_state(const TrainConfig& cfg, const std::vector<MoleculeSpec>& mols);

/// Runs iterations state.iteration .. cfg.iterations - 1. Iteration t trains
/// on mols[t % mols.size()].
void run_iterations(TrainState& state, const TrainConfig& cfg, const Dataset& data,
                    const std::vector<MoleculeSpec>& mols, Sampling sampling,
                    const TrainHooks* hooks = nullptr);

TrainState train_plain(const MoleculeSpec& mol, const TrainConfig& cfg, const Dataset& data,
                       const TrainHooks* hooks = nullptr);
TrainState pretrain(const std::vector<MoleculeSpec>& mols, const TrainConfig& cfg,
                    const Dataset& data, const TrainHooks* hooks = nullptr);
/// Continues from `params` with a fresh optimizer, drawing r only from
/// cfg.fewshot_bonds. A missing head for `mol` is zero-initialized.
TrainState finetune(const ParamStore& params, const MoleculeSpec& mol, const TrainConfig& cfg,
                    const Dataset& data, const TrainHooks* hooks = nullptr);

struct PecRow {
  double r = 0.0;
  double energy = 0.0;
  double exact = 0.0;
  double delta = 0.0;
};

struct PecResult {
  std::vector<PecRow> rows;
  double mean_abs_delta = 0.0;

  static const char* csv_header();
  void write_csv(const std::filesystem::path& path) const;
};

/// 0.1, 0.2, ..., 4.9 Bohr.
std::vector<double> default_sweep_grid();

/// Ground energy of a dataset file, cached per path for the process lifetime.
double exact_energy(const DatasetEntry& entry);

/// Model energy against the exact oracle at every grid point; each point
/// needs a dataset file at exactly that bond length.
PecResult sweep_pec(const ParamStore& params, const MoleculeSpec& mol,
                    const std::vector<double>& grid, const Dataset& data,
                    const ModelConfig& cfg);

/// sweep_pec without any training; a missing head is zero-initialized.
PecResult zero_shot_eval(const ParamStore& params, const MoleculeSpec& mol,
                         const std::vector<double>& grid, const Dataset& data,
                         const ModelConfig& cfg);

}  // namespace mqt
