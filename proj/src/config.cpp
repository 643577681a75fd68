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

#include "mqt/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

using nlohmann::json;

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& base, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(base.empty() ? "<root>" : base, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(join_path(base, key), "unknown key");
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<long long>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], fmt::format("{}[{}]", path, i)));
  }
  return out;
}

void parse_model(const json& obj, ModelConfig& m) {
  reject_unknown(obj, "model", {"d_emb", "layers", "kind", "max_electron_id"});
  if (obj.contains("d_emb")) m.d_emb = static_cast<int>(get_integer(obj["d_emb"], "model.d_emb"));
  if (obj.contains("layers")) {
    m.layers = static_cast<int>(get_integer(obj["layers"], "model.layers"));
  }
  if (obj.contains("kind")) {
    try {
      m.kind = parse_model_kind(get_string(obj["kind"], "model.kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("model.kind", e.what());
    }
  }
  if (obj.contains("max_electron_id")) {
    m.max_electron_id =
        static_cast<int>(get_integer(obj["max_electron_id"], "model.max_electron_id"));
  }
}

}  // namespace

void RunConfig::validate() const {
  train.validate();
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (sweep_grid.empty()) throw ConfigError("sweep_grid", "must not be empty");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every", "must be non-negative");
  if (!(classical_learning_rate > 0.0)) {
    throw ConfigError("classical_learning_rate", "must be positive");
  }
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "",
                 {"learning_rate", "weight_decay", "iterations", "bond_range", "seed",
                  "grad_mode", "fd_step", "max_branches", "molecules", "fewshot_bonds", "model",
                  "snap_step", "threads", "dataset", "trials", "sweep_grid", "checkpoint_every",
                  "classical_learning_rate"});
  RunConfig c;
  auto& t = c.train;
  if (doc.contains("learning_rate")) t.learning_rate = get_number(doc["learning_rate"], "learning_rate");
  if (doc.contains("weight_decay")) t.weight_decay = get_number(doc["weight_decay"], "weight_decay");
  if (doc.contains("iterations")) {
    t.iterations = static_cast<int>(get_integer(doc["iterations"], "iterations"));
  }
  if (doc.contains("bond_range")) {
    const auto b = get_numbers(doc["bond_range"], "bond_range");
    if (b.size() != 2) throw ConfigError("bond_range", "expected [lo, hi]");
    t.bond_lo = b[0];
    t.bond_hi = b[1];
  }
  if (doc.contains("seed")) {
    const auto s = get_integer(doc["seed"], "seed");
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    t.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("grad_mode")) {
    try {
      t.grad_mode = parse_grad_mode(get_string(doc["grad_mode"], "grad_mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grad_mode", e.what());
    }
  }
  if (doc.contains("fd_step")) t.fd_step = get_number(doc["fd_step"], "fd_step");
  if (doc.contains("max_branches")) {
    t.max_branches = static_cast<int>(get_integer(doc["max_branches"], "max_branches"));
  }
  if (doc.contains("molecules")) {
    const auto& v = doc["molecules"];
    if (!v.is_array()) throw ConfigError("molecules", "expected an array of names");
    t.molecules.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      t.molecules.push_back(get_string(v[i], fmt::format("molecules[{}]", i)));
    }
  }
  if (doc.contains("fewshot_bonds")) {
    t.fewshot_bonds = get_numbers(doc["fewshot_bonds"], "fewshot_bonds");
  }
  if (doc.contains("model")) parse_model(doc["model"], t.model);
  if (doc.contains("snap_step")) t.snap_step = get_number(doc["snap_step"], "snap_step");
  if (doc.contains("threads")) t.threads = static_cast<int>(get_integer(doc["threads"], "threads"));
  if (doc.contains("dataset")) c.dataset = get_string(doc["dataset"], "dataset");
  if (doc.contains("trials")) c.trials = static_cast<int>(get_integer(doc["trials"], "trials"));
  if (doc.contains("sweep_grid")) c.sweep_grid = get_numbers(doc["sweep_grid"], "sweep_grid");
  if (doc.contains("checkpoint_every")) {
    c.checkpoint_every = static_cast<int>(get_integer(doc["checkpoint_every"], "checkpoint_every"));
  }
  if (doc.contains("classical_learning_rate")) {
    c.classical_learning_rate =
        get_number(doc["classical_learning_rate"], "classical_learning_rate");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", fmt::format("cannot open {}", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  const auto& t = c.train;
  json j;
  j["learning_rate"] = t.learning_rate;
  j["weight_decay"] = t.weight_decay;
  j["iterations"] = t.iterations;
  j["bond_range"] = {t.bond_lo, t.bond_hi};
  j["seed"] = t.seed;
  j["grad_mode"] = to_string(t.grad_mode);
  j["fd_step"] = t.fd_step;
  j["max_branches"] = t.max_branches;
  j["molecules"] = t.molecules;
  j["fewshot_bonds"] = t.fewshot_bonds;
  j["model"] = {{"d_emb", t.model.d_emb},
                {"layers", t.model.layers},
                {"kind", to_string(t.model.kind)},
                {"max_electron_id", t.model.max_electron_id}};
  j["snap_step"] = t.snap_step;
  j["threads"] = t.threads;
  j["dataset"] = c.dataset;
  j["trials"] = c.trials;
  j["sweep_grid"] = c.sweep_grid;
  j["checkpoint_every"] = c.checkpoint_every;
  j["classical_learning_rate"] = c.classical_learning_rate;
  return j;
}

}  // namespace mqt
