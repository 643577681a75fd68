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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mqt/checkpoint.hpp"
#include "mqt/cli.hpp"
#include "mqt/config.hpp"
#include "mqt/errors.hpp"
#include "mqt/train.hpp"

using namespace mqt;
namespace fs = std::filesystem;

namespace {

const std::string kToy = std::string(MQT_DATA_DIR) + "/h2_sto3g_bk";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mqt_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

// Data rows plus header; trailing '#' summary lines are skipped.
std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty() && line[0] != '#';
  return n;
}

void write_json(const fs::path& p, const nlohmann::json& j) { std::ofstream(p) << j.dump(2); }

nlohmann::json small_config() {
  return {{"iterations", 4},    {"grad_mode", "spsa"},      {"model", {{"d_emb", 4}, {"layers", 1}}},
          {"dataset", kToy},    {"checkpoint_every", 2},    {"sweep_grid", {0.5, 1.4, 3.0}}};
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("train writes every planned output with stable headers") {
  const auto dir = scratch("train");
  write_json(dir / "cfg.json", small_config());
  const auto res = cli({"train", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "run").string(), "--seed", "1"});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  const auto run = dir / "run";
  CHECK(first_line(run / "trial0/record.csv") ==
        "iteration,molecule,r,r_grid,energy,grad_norm_upstream,grad_norm_downstream,"
        "discarded_mass");
  CHECK(first_line(run / "trial0/timing.csv") == "iteration,wall_seconds");
  CHECK(first_line(run / "trial0/pec_H2.csv") == "r,energy,exact,delta");
  CHECK(first_line(run / "summary.csv") == "trial,seed,molecule,mean_abs_delta");
  CHECK(line_count(run / "trial0/record.csv") == 5);
  CHECK(line_count(run / "trial0/pec_H2.csv") == 4);

  const auto manifest = nlohmann::json::parse(slurp(run / "manifest.json"));
  CHECK(manifest["command"] == "train");
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["code_version"] == code_version());
  CHECK(manifest["dataset"]["files"].size() == 100);
  for (const auto& f : manifest["outputs"]) CHECK_MESSAGE(fs::exists(run / f.get<std::string>()), f);
  CHECK(parse_config(nlohmann::json::parse(slurp(run / "config.json"))).train.seed == 1);
}

TEST_CASE("unknown config keys are a usage error naming the key") {
  const auto dir = scratch("unknown");
  auto j = small_config();
  j["model"]["depth"] = 3;
  write_json(dir / "cfg.json", j);
  const auto res = cli({"train", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "run").string()});
  CHECK(res.code == kExitUsage);
  CHECK(res.err.find("model.depth") != std::string::npos);

  j = small_config();
  j["learning_rate"] = -1.0;
  write_json(dir / "cfg.json", j);
  const auto neg = cli({"train", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "run").string()});
  CHECK(neg.code == kExitUsage);
  CHECK(neg.err.find("learning_rate") != std::string::npos);
}

TEST_CASE("flag errors are usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"bogus"}).code == kExitUsage);
  CHECK(cli({"train", "--out", "x", "--grad-mode", "adjoint"}).code == kExitUsage);
  CHECK(cli({"train", "--out", "x", "--trials", "0"}).code == kExitUsage);
  // No dataset anywhere.
  CHECK(cli({"train", "--out", (scratch("nodata") / "run").string()}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("oracle on an empty dataset directory exits with a usage error") {
  const auto dir = scratch("empty");
  fs::create_directories(dir / "data");
  const auto res = cli({"oracle", "--dataset", (dir / "data").string(), "--out",
                        (dir / "run").string()});
  CHECK(res.code == kExitUsage);
  CHECK(res.err.find("empty") != std::string::npos);
  CHECK(cli({"oracle", "--dataset", (dir / "absent").string(), "--out", (dir / "run").string()})
            .code == kExitUsage);
}

TEST_CASE("oracle over the sweep grid writes 49 rows") {
  const auto dir = scratch("oracle");
  const auto res = cli({"oracle", "--dataset", kToy, "--out", (dir / "run").string(),
                        "--sweep-only", "--molecule", "H2"});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  const auto csv = dir / "run/oracle.csv";
  CHECK(first_line(csv) == "molecule,r,exact,reference,abs_diff");
  CHECK(line_count(csv) == 50);
}

TEST_CASE("oracle reports data files whose reference disagrees") {
  const auto dir = scratch("badref");
  fs::create_directories(dir / "data");
  auto doc = nlohmann::json::parse(slurp(fs::path(kToy) / "H2_r1.40.json"));
  doc["reference_energy_hartree"] = doc["reference_energy_hartree"].get<double>() + 1e-3;
  write_json(dir / "data/H2_r1.40.json", doc);
  const auto res = cli({"oracle", "--dataset", (dir / "data").string(), "--out",
                        (dir / "run").string()});
  CHECK(res.code == kExitData);
  CHECK(res.err.find("H2_r1.40.json") != std::string::npos);
}

TEST_CASE("sweep without a checkpoint traces the Hartree-Fock curve") {
  const auto dir = scratch("sweep");
  write_json(dir / "cfg.json", small_config());
  const auto res = cli({"sweep", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "run").string()});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  const auto data = Dataset::load(kToy);
  std::ifstream in(dir / "run/pec_H2.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double r, e, exact, delta;
    char c;
    std::istringstream ss(line);
    ss >> r >> c >> e >> c >> exact >> c >> delta;
    const auto& meta = data.exact("H2", r).hamiltonian.metadata();
    CHECK(std::abs(e - *meta.hf_energy) < 1e-6);
    CHECK(delta >= 0.0);
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("checkpoints round-trip parameters, optimizer and record") {
  const auto dir = scratch("ckpt");
  TrainConfig cfg;
  cfg.iterations = 3;
  cfg.model.d_emb = 4;
  cfg.model.layers = 1;
  const auto data = Dataset::load(kToy);
  const auto mol = resolve_molecule(data, "H2");
  const auto st = train_plain(mol, cfg, data);
  write_checkpoint(dir / "a.ckpt", checkpoint_from_state(st, {{"tag", "x"}}));
  const auto back = read_checkpoint(dir / "a.ckpt");
  CHECK(back.metadata.at("tag") == "x");
  const auto st2 = state_from_checkpoint(back);
  CHECK(st2.params.checksum() == st.params.checksum());
  CHECK(st2.iteration == 3);
  CHECK(st2.adam.t == st.adam.t);
  CHECK(st2.adam.m == st.adam.m);
  CHECK(st2.adam.v == st.adam.v);
  CHECK(st2.record.csv() == st.record.csv());
  auto r1 = st.rng, r2 = st2.rng;
  CHECK(r1() == r2());
  for (const auto& t : st.params.tensors()) {
    const auto& u = st2.params.info(t.name);
    CHECK(u.shape == t.shape);
    CHECK(u.group == t.group);
    CHECK(u.decay == t.decay);
  }

  // Truncation and foreign files are rejected.
  const auto bytes = slurp(dir / "a.ckpt");
  std::ofstream(dir / "short.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(read_checkpoint(dir / "short.ckpt"), ParseError);
  std::ofstream(dir / "junk.ckpt", std::ios::binary) << "hello";
  CHECK_THROWS_AS(read_checkpoint(dir / "junk.ckpt"), ParseError);
  CHECK_THROWS_AS(read_checkpoint(dir / "missing.ckpt"), DataError);
}

TEST_CASE("a resumed run reproduces the uninterrupted one") {
  const auto dir = scratch("resume");
  auto j = small_config();
  j["checkpoint_every"] = 2;
  write_json(dir / "cfg.json", j);
  const auto cfgpath = (dir / "cfg.json").string();
  REQUIRE(cli({"train", "--config", cfgpath, "--out", (dir / "full").string()}).code == kExitOk);

  // Rebuild the state after 2 of 4 iterations and drop it where an
  // interrupted run would have left it.
  const auto rc = load_config(cfgpath);
  auto tc = rc.train;
  tc.iterations = 2;
  const auto data = Dataset::load(kToy);
  const auto mol = resolve_molecule(data, "H2");
  const auto half = train_plain(mol, tc, data);
  auto meta = read_checkpoint(dir / "full/trial0/state.ckpt").metadata;
  fs::create_directories(dir / "part/trial0");
  write_checkpoint(dir / "part/trial0/state.ckpt", checkpoint_from_state(half, meta));

  const auto res = cli({"train", "--config", cfgpath, "--out", (dir / "part").string(), "--resume"});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  CHECK(res.out.find("resuming") != std::string::npos);
  CHECK(slurp(dir / "part/trial0/record.csv") == slurp(dir / "full/trial0/record.csv"));
  CHECK(slurp(dir / "part/trial0/pec_H2.csv") == slurp(dir / "full/trial0/pec_H2.csv"));
  CHECK(read_checkpoint(dir / "part/trial0/params.ckpt").params.checksum() ==
        read_checkpoint(dir / "full/trial0/params.ckpt").params.checksum());

  // A different seed must not silently pick up the old state.
  CHECK(cli({"train", "--config", cfgpath, "--out", (dir / "part").string(), "--resume", "--seed",
             "9"})
            .code == kExitUsage);
}

TEST_CASE("finetune reports zero-shot and fine-tuned errors") {
  const auto dir = scratch("finetune");
  write_json(dir / "cfg.json", small_config());
  const auto cfgpath = (dir / "cfg.json").string();
  REQUIRE(cli({"pretrain", "--config", cfgpath, "--out", (dir / "pre").string()}).code == kExitOk);
  const auto ckpt = (dir / "pre/trial0/params.ckpt").string();
  const auto res = cli({"finetune", "--config", cfgpath, "--out", (dir / "ft").string(),
                        "--checkpoint", ckpt, "--trials", "2"});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  CHECK(first_line(dir / "ft/summary.csv") ==
        "trial,seed,molecule,zero_shot_mean_abs_delta,mean_abs_delta");
  CHECK(line_count(dir / "ft/summary.csv") == 3);
  CHECK(first_line(dir / "ft/trial1/zero_shot_H2.csv") == "r,energy,exact,delta");
  const auto manifest = nlohmann::json::parse(slurp(dir / "ft/manifest.json"));
  CHECK(manifest["input_checkpoint"]["path"] == ckpt);

  CHECK(cli({"finetune", "--config", cfgpath, "--out", (dir / "ft2").string()}).code ==
        kExitUsage);
  auto wide = small_config();
  wide["model"]["d_emb"] = 6;
  write_json(dir / "wide.json", wide);
  CHECK(cli({"finetune", "--config", (dir / "wide.json").string(), "--out",
             (dir / "ft3").string(), "--checkpoint", ckpt})
            .code == kExitUsage);
}

TEST_CASE("compare writes the two-row table") {
  const auto dir = scratch("compare");
  auto j = small_config();
  j["iterations"] = 2;
  write_json(dir / "cfg.json", j);
  const auto res = cli({"compare", "--config", (dir / "cfg.json").string(), "--out",
                        (dir / "run").string()});
  REQUIRE_MESSAGE(res.code == kExitOk, res.err);
  CHECK(res.out.find("token tensors identical") != std::string::npos);
  const auto table = slurp(dir / "run/compare.csv");
  std::istringstream ss(table);
  std::string a, b, c;
  std::getline(ss, a);
  std::getline(ss, b);
  std::getline(ss, c);
  CHECK(a == "metric,H2");
  CHECK(b.rfind("delta_c,", 0) == 0);
  CHECK(c.rfind("delta_q,", 0) == 0);
  CHECK(first_line(dir / "run/summary.csv") == "trial,seed,delta_c,delta_q");
  for (const char* f : {"trial0/record_quantum.csv", "trial0/record_classical.csv",
                        "trial0/pec_classical_H2.csv", "trial0/params_quantum.ckpt"}) {
    CHECK_MESSAGE(fs::exists(dir / "run" / f), f);
  }
}

TEST_CASE("the installed binary returns the documented exit codes") {
  const auto dir = scratch("binary");
  fs::create_directories(dir / "data");
  const std::string bin = MQT_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status(bin + " oracle --dataset " + (dir / "data").string() + " --out " +
               (dir / "run").string()) == kExitUsage);
  CHECK(status(bin + " oracle --dataset " + kToy + " --sweep-only --out " +
               (dir / "ok").string()) == kExitOk);
}
