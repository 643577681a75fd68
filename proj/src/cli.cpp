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

#include "mqt/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mqt/checkpoint.hpp"
#include "mqt/config.hpp"
#include "mqt/dataset.hpp"
#include "mqt/errors.hpp"
#include "mqt/train.hpp"

#ifndef MQT_VERSION
#define MQT_VERSION "0.0.0"
#endif

namespace mqt {

namespace fs = std::filesystem;
using nlohmann::json;

const char* code_version() { return MQT_VERSION; }

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string dataset;
  std::string out;
  std::optional<long long> seed;
  std::string grad_mode;
  std::optional<int> trials;
  std::optional<int> iterations;
  std::string checkpoint;
  std::string molecule;
  bool resume = false;
  bool sweep_only = false;
  std::vector<std::string> argv;
};

struct Run {
  Options opt;
  RunConfig cfg;
  fs::path out;
  std::optional<Dataset> data;
  std::ostream* log = nullptr;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError(fmt::format("cannot write {}", path.string()));
  f << text;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::string config_digest(const RunConfig& cfg) {
  auto j = to_json(cfg);
  // The trial count may change between a run and its resume.
  j.erase("trials");
  const auto s = j.dump();
  return hex64(fnv1a64(std::span<const char>(s.data(), s.size())));
}

RunConfig build_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) {
    if (*o.seed < 0) throw ConfigError("seed", "must be non-negative");
    cfg.train.seed = static_cast<std::uint64_t>(*o.seed);
  }
  if (!o.grad_mode.empty()) {
    try {
      cfg.train.grad_mode = parse_grad_mode(o.grad_mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grad_mode", e.what());
    }
  }
  if (o.trials) cfg.trials = *o.trials;
  if (o.iterations) cfg.train.iterations = *o.iterations;
  if (!o.dataset.empty()) cfg.dataset = o.dataset;
  if (!o.molecule.empty()) cfg.train.molecules = {o.molecule};
  cfg.validate();
  if (cfg.dataset.empty()) throw ConfigError("dataset", "a dataset directory is required");
  return cfg;
}

std::vector<std::string> planned_outputs(const Run& run) {
  std::vector<std::string> out{"manifest.json", "config.json"};
  const auto& mols = run.cfg.train.molecules;
  const std::string& cmd = run.opt.command;
  if (cmd == "oracle") return {"manifest.json", "config.json", "oracle.csv"};
  if (cmd == "sweep") {
    for (const auto& m : mols) out.push_back(fmt::format("pec_{}.csv", m));
    return out;
  }
  if (cmd == "compare") out.push_back("compare.csv");
  out.push_back("summary.csv");
  for (int t = 0; t < run.cfg.trials; ++t) {
    const std::string dir = fmt::format("trial{}/", t);
    if (cmd == "compare") {
      for (const char* kind : {"quantum", "classical"}) {
        out.push_back(dir + fmt::format("record_{}.csv", kind));
        out.push_back(dir + fmt::format("timing_{}.csv", kind));
        out.push_back(dir + fmt::format("pec_{}_{}.csv", kind, mols.front()));
        out.push_back(dir + fmt::format("params_{}.ckpt", kind));
      }
      continue;
    }
    out.push_back(dir + "record.csv");
    out.push_back(dir + "timing.csv");
    out.push_back(dir + "params.ckpt");
    if (cmd == "finetune") out.push_back(dir + fmt::format("zero_shot_{}.csv", mols.front()));
    const std::size_t n_pec = cmd == "pretrain" ? mols.size() : 1;
    for (std::size_t k = 0; k < n_pec; ++k) out.push_back(dir + fmt::format("pec_{}.csv", mols[k]));
  }
  return out;
}

void write_manifest(const Run& run) {
  json m;
  m["command"] = run.opt.command;
  m["argv"] = run.opt.argv;
  m["code_version"] = code_version();
  m["seed"] = run.cfg.train.seed;
  m["trials"] = run.cfg.trials;
  m["config"] = to_json(run.cfg);
  json files = json::array();
  if (run.data) {
    for (const auto& [path, sum] : run.data->checksums()) {
      files.push_back({{"path", path}, {"fnv1a64", hex64(sum)}});
    }
  }
  m["dataset"] = {{"dir", run.cfg.dataset}, {"files", files}};
  if (!run.opt.checkpoint.empty()) {
    m["input_checkpoint"] = {{"path", run.opt.checkpoint},
                             {"fnv1a64", hex64(file_checksum(run.opt.checkpoint))}};
  }
  m["outputs"] = planned_outputs(run);
  write_text(run.out / "manifest.json", m.dump(2) + "\n");
  write_text(run.out / "config.json", to_json(run.cfg).dump(2) + "\n");
}

std::vector<MoleculeSpec> resolve_all(const Run& run) {
  std::vector<MoleculeSpec> mols;
  for (const auto& name : run.cfg.train.molecules) mols.push_back(resolve_molecule(*run.data, name));
  return mols;
}

TrainConfig trial_config(const RunConfig& cfg, int trial) {
  TrainConfig t = cfg.train;
  t.seed = cfg.train.seed + static_cast<std::uint64_t>(trial);
  return t;
}

std::map<std::string, std::string> run_metadata(const Run& run, const TrainConfig& tc,
                                                const std::string& tag) {
  return {{"command", run.opt.command},
          {"config_digest", config_digest(run.cfg)},
          {"seed", std::to_string(tc.seed)},
          {"tag", tag},
          {"code_version", code_version()},
          {"model_kind", to_string(tc.model.kind)},
          {"d_emb", std::to_string(tc.model.d_emb)},
          {"layers", std::to_string(tc.model.layers)}};
}

// Loads dir/state_<tag>.ckpt when resuming and it matches this run.
std::optional<TrainState> try_resume(const Run& run, const fs::path& path, const TrainConfig& tc) {
  if (!run.opt.resume || !fs::exists(path)) return std::nullopt;
  auto ck = read_checkpoint(path);
  if (ck.metadata["config_digest"] != config_digest(run.cfg) ||
      ck.metadata["seed"] != std::to_string(tc.seed)) {
    throw ConfigError("resume", fmt::format("{} was written by a different configuration",
                                            path.string()));
  }
  *run.log << fmt::format("resuming {} at iteration {}\n", path.string(), ck.metadata["iteration"]);
  return state_from_checkpoint(ck);
}

// Trains on `mols` (fresh or resumed), writing resumable checkpoints, and
// returns the final state.
TrainState train_trial(const Run& run, const fs::path& dir, const TrainConfig& tc,
                       const std::vector<MoleculeSpec>& mols, Sampling sampling,
                       const std::string& tag, const ParamStore* start) {
  const fs::path state_path = dir / fmt::format("state{}.ckpt", tag.empty() ? "" : "_" + tag);
  TrainHooks hooks;
  hooks.every = run.cfg.checkpoint_every;
  const auto meta = run_metadata(run, tc, tag);
  hooks.on_checkpoint = [&](const TrainState& s) {
    write_checkpoint(state_path, checkpoint_from_state(s, meta));
  };
  auto resumed = try_resume(run, state_path, tc);
  if (resumed) {
    run_iterations(*resumed, tc, *run.data, mols, sampling, &hooks);
    return std::move(*resumed);
  }
  if (sampling == Sampling::FewShot) return finetune(*start, mols.front(), tc, *run.data, &hooks);
  return pretrain(mols, tc, *run.data, &hooks);
}

void write_outputs(const fs::path& dir, const TrainState& st, const std::string& suffix,
                   std::map<std::string, std::string> meta) {
  st.record.write_csv(dir / fmt::format("record{}.csv", suffix));
  st.record.write_timing_csv(dir / fmt::format("timing{}.csv", suffix));
  write_checkpoint(dir / fmt::format("params{}.ckpt", suffix),
                   checkpoint_from_state(st, std::move(meta)));
}

ParamStore load_params(const std::string& path) {
  if (path.empty()) throw ConfigError("checkpoint", "--checkpoint is required");
  return read_checkpoint(path).params;
}

int cmd_oracle(Run& run) {
  std::string csv = "molecule,r,exact,reference,abs_diff\n";
  std::vector<std::string> mismatches;
  const auto mols = run.opt.molecule.empty() ? run.data->molecules()
                                             : std::vector<std::string>{run.opt.molecule};
  for (const auto& name : mols) {
    if (!run.data->has(name)) throw DataError(fmt::format("dataset has no files for {}", name));
    std::vector<const DatasetEntry*> entries;
    if (run.opt.sweep_only) {
      for (double r : run.cfg.sweep_grid) entries.push_back(&run.data->exact(name, r));
    } else {
      for (const auto& e : run.data->entries(name)) entries.push_back(&e);
    }
    for (const auto* e : entries) {
      const double exact = exact_energy(*e);
      const auto& ref = e->hamiltonian.metadata().reference_energy;
      std::string ref_s, diff_s;
      if (ref) {
        const double diff = std::abs(exact - *ref);
        ref_s = fmt::format("{:.17g}", *ref);
        diff_s = fmt::format("{:.3e}", diff);
        if (diff > 1e-6) mismatches.push_back(e->path.string());
      }
      csv += fmt::format("{},{:.17g},{:.17g},{},{}\n", name, e->bond_length(), exact, ref_s,
                         diff_s);
    }
  }
  write_text(run.out / "oracle.csv", csv);
  if (!mismatches.empty()) {
    throw DataError(fmt::format("oracle disagrees with reference_energy beyond 1e-6 in: {}",
                                fmt::join(mismatches, ", ")));
  }
  return kExitOk;
}

int cmd_train_like(Run& run) {
  const auto mols = resolve_all(run);
  const bool pre = run.opt.command == "pretrain";
  const bool fine = run.opt.command == "finetune";
  if (!pre && mols.size() != 1) {
    throw ConfigError("molecules", fmt::format("{} trains exactly one molecule", run.opt.command));
  }
  std::optional<ParamStore> start;
  if (fine) start = load_params(run.opt.checkpoint);
  const auto model = run.cfg.train.model_config();

  std::string summary = fine ? "trial,seed,molecule,zero_shot_mean_abs_delta,mean_abs_delta\n"
                             : "trial,seed,molecule,mean_abs_delta\n";
  for (int t = 0; t < run.cfg.trials; ++t) {
    const auto tc = trial_config(run.cfg, t);
    const fs::path dir = run.out / fmt::format("trial{}", t);
    fs::create_directories(dir);
    double zero_shot = 0.0;
    if (fine) {
      check_compatible(*start, model);
      const auto z = zero_shot_eval(*start, mols.front(), run.cfg.sweep_grid, *run.data, model);
      z.write_csv(dir / fmt::format("zero_shot_{}.csv", mols.front().name()));
      zero_shot = z.mean_abs_delta;
    }
    const auto st = train_trial(run, dir, tc, mols, fine ? Sampling::FewShot : Sampling::BondRange,
                                "", start ? &*start : nullptr);
    write_outputs(dir, st, "", run_metadata(run, tc, ""));
    const std::size_t n_pec = pre ? mols.size() : 1;
    for (std::size_t k = 0; k < n_pec; ++k) {
      const auto pec = sweep_pec(st.params, mols[k], run.cfg.sweep_grid, *run.data, model);
      pec.write_csv(dir / fmt::format("pec_{}.csv", mols[k].name()));
      if (fine) {
        summary += fmt::format("{},{},{},{:.17g},{:.17g}\n", t, tc.seed, mols[k].name(), zero_shot,
                               pec.mean_abs_delta);
        *run.log << fmt::format("trial {} {}: zero-shot {:.6f} Ha, fine-tuned {:.6f} Ha\n", t,
                                mols[k].name(), zero_shot, pec.mean_abs_delta);
      } else {
        summary += fmt::format("{},{},{},{:.17g}\n", t, tc.seed, mols[k].name(), pec.mean_abs_delta);
        *run.log << fmt::format("trial {} {}: mean |dE| {:.6f} Ha\n", t, mols[k].name(),
                                pec.mean_abs_delta);
      }
    }
  }
  write_text(run.out / "summary.csv", summary);
  return kExitOk;
}

int cmd_sweep(Run& run) {
  const auto mols = resolve_all(run);
  const auto model = run.cfg.train.model_config();
  ParamStore params;
  if (run.opt.checkpoint.empty()) {
    init_params(params, model, run.cfg.train.seed);
  } else {
    params = load_params(run.opt.checkpoint);
    check_compatible(params, model);
  }
  for (const auto& mol : mols) {
    const auto pec = zero_shot_eval(params, mol, run.cfg.sweep_grid, *run.data, model);
    pec.write_csv(run.out / fmt::format("pec_{}.csv", mol.name()));
    *run.log << fmt::format("{}: mean |dE| {:.6f} Ha over {} points\n", mol.name(),
                            pec.mean_abs_delta, pec.rows.size());
  }
  return kExitOk;
}

int cmd_compare(Run& run) {
  const auto mols = resolve_all(run);
  if (mols.size() != 1) throw ConfigError("molecules", "compare takes exactly one molecule");
  const auto& mol = mols.front();
  double dq = 0.0, dc = 0.0;
  std::string summary = "trial,seed,delta_c,delta_q\n";
  for (int t = 0; t < run.cfg.trials; ++t) {
    const fs::path dir = run.out / fmt::format("trial{}", t);
    fs::create_directories(dir);
    auto tq = trial_config(run.cfg, t);
    tq.model.kind = ModelKind::Quantum;
    auto tcl = tq;
    tcl.model.kind = ModelKind::Classical;
    tcl.learning_rate = run.cfg.classical_learning_rate;

    // Both models must consume the same tokens.
    const auto init_q = initial_state(tq, mols);
    const auto init_c = initial_state(tcl, mols);
    for (double r : run.cfg.sweep_grid) {
      if (!(tokenize(mol, r, init_q.params, tq.model_config()).tokens ==
            tokenize(mol, r, init_c.params, tcl.model_config()).tokens)) {
        throw std::logic_error(fmt::format("token tensors differ at r = {}", r));
      }
    }

    double delta[2];
    int k = 0;
    for (const auto* tc : {&tq, &tcl}) {
      const std::string kind = to_string(tc->model.kind);
      const auto st = train_trial(run, dir, *tc, mols, Sampling::BondRange, kind, nullptr);
      write_outputs(dir, st, "_" + kind, run_metadata(run, *tc, kind));
      const auto pec = sweep_pec(st.params, mol, run.cfg.sweep_grid, *run.data, tc->model_config());
      pec.write_csv(dir / fmt::format("pec_{}_{}.csv", kind, mol.name()));
      delta[k++] = pec.mean_abs_delta;
    }
    summary += fmt::format("{},{},{:.17g},{:.17g}\n", t, tq.seed, delta[1], delta[0]);
    *run.log << fmt::format("trial {}: delta_c {:.6f} Ha, delta_q {:.6f} Ha\n", t, delta[1],
                            delta[0]);
    dq += delta[0] / run.cfg.trials;
    dc += delta[1] / run.cfg.trials;
  }
  write_text(run.out / "summary.csv", summary);
  write_text(run.out / "compare.csv", fmt::format("metric,{0}\ndelta_c,{1:.17g}\ndelta_q,{2:.17g}\n",
                                                  mol.name(), dc, dq));
  *run.log << "token tensors identical for both models\n";
  return kExitOk;
}

int dispatch(Run& run) {
  const auto& cmd = run.opt.command;
  if (cmd == "oracle") {
    const fs::path dir = run.cfg.dataset;
    if (!fs::is_directory(dir) || fs::is_empty(dir)) {
      throw ConfigError("dataset", fmt::format("{} is missing or empty", dir.string()));
    }
  }
  run.data = Dataset::load(run.cfg.dataset);
  fs::create_directories(run.out);
  write_manifest(run);
  if (cmd == "oracle") return cmd_oracle(run);
  if (cmd == "sweep") return cmd_sweep(run);
  if (cmd == "compare") return cmd_compare(run);
  return cmd_train_like(run);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Molecular quantum Transformer: training and evaluation on simulated circuits",
               "mqt"};
  app.require_subcommand(1);
  Options o;
  o.argv = args;
  long long seed = 0;
  int trials = 0, iterations = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--dataset", o.dataset, "Dataset directory");
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--seed", seed, "Base seed; trial k uses seed + k");
    sub->add_option("--grad-mode", o.grad_mode, "Upstream gradient: fd or spsa")
        ->check(CLI::IsMember({"fd", "fd-central", "spsa"}));
    sub->add_option("--trials", trials, "Number of seeds")->check(CLI::PositiveNumber);
    sub->add_option("--iterations", iterations, "Override the iteration count")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--molecule", o.molecule, "Restrict to one molecule");
  };
  auto* oracle = app.add_subcommand("oracle", "Exact ground energies of every dataset file");
  add_common(oracle);
  oracle->add_flag("--sweep-only", o.sweep_only, "Only the sweep grid points");
  for (const auto& [name, help] :
       std::vector<std::pair<std::string, std::string>>{
           {"train", "Train on one molecule over random bond lengths"},
           {"pretrain", "Round-robin training over several molecules"},
           {"finetune", "Few-shot fine-tuning of a checkpoint"},
           {"sweep", "Evaluate a checkpoint over the sweep grid"},
           {"compare", "Classical versus quantum model at equal dimensions"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    sub->add_option("--checkpoint", o.checkpoint, "Input parameter checkpoint");
    sub->add_flag("--resume", o.resume, "Continue from the last state checkpoint in --out");
  }

  std::vector<std::string> storage{"mqt"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) o.command = sub->get_name();
  auto* sub = app.get_subcommand(o.command);
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--trials")) o.trials = trials;
  if (sub->count("--iterations")) o.iterations = iterations;

  try {
    Run run;
    run.opt = o;
    run.cfg = build_config(o);
    run.out = o.out;
    run.log = &out;
    return dispatch(run);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace mqt
