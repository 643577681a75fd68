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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqt/train.hpp"

namespace mqt {

/// Everything a CLI run needs besides the command line itself.
struct RunConfig {
  TrainConfig train;
  /// Dataset directory; the --dataset flag overrides it.
  std::string dataset;
  int trials = 1;
  std::vector<double> sweep_grid = default_sweep_grid();
  /// Iterations between resumable checkpoints (0 disables).
  int checkpoint_every = 50;
  /// Learning rate of the classical model in `compare`.
  double classical_learning_rate = 0.008;

  void validate() const;
};

/// Strict parse: unknown keys and wrong types raise ConfigError naming the
/// JSON path, e.g. "model.d_emb".
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Complete snapshot; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace mqt
