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

#include "mqt/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mqt/errors.hpp"

namespace mqt {

namespace {

constexpr char kMagic[8] = {'M', 'Q', 'T', 'C', 'K', 'P', 'T', '\0'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.append(c, n);
  }
  template <class T>
  void uint(T v) {
    for (std::size_t b = 0; b < sizeof(T); ++b) buf_.push_back(static_cast<char>(v >> (8 * b)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    uint<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string data) : buf_(std::move(data)) {}
  void need(std::size_t n, const char* what) {
    if (pos_ + n > buf_.size()) throw ParseError(what, "checkpoint is truncated");
  }
  template <class T>
  T uint(const char* what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      v |= static_cast<T>(static_cast<unsigned char>(buf_[pos_ + b])) << (8 * b);
    }
    pos_ += sizeof(T);
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }
  std::string str(const char* what) {
    const auto n = uint<std::uint32_t>(what);
    need(n, what);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string raw(std::size_t n, const char* what) {
    need(n, what);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  std::string buf_;
  std::size_t pos_ = 0;
};

std::string sidecar(const Checkpoint& ckpt) {
  std::string out = fmt::format("mqt checkpoint v{}\n", kCheckpointVersion);
  for (const auto& [k, v] : ckpt.metadata) {
    if (k == "rng_state") continue;
    out += fmt::format("meta {} = {}\n", k, v);
  }
  for (const auto& t : ckpt.params.tensors()) {
    out += fmt::format("tensor {} shape [{}] group {} decay {}\n", t.name,
                       fmt::format("{}", fmt::join(t.shape, ", ")),
                       t.group == ParamGroup::Upstream ? "upstream" : "downstream",
                       t.decay ? "yes" : "no");
  }
  for (const auto& [k, v] : ckpt.arrays) out += fmt::format("array {} length {}\n", k, v.size());
  out += fmt::format("checksum {:016x}\n", ckpt.params.checksum());
  return out;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.uint<std::uint32_t>(kCheckpointVersion);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    w.str(k);
    w.str(v);
  }
  const auto values = ckpt.params.values();
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.params.tensors().size()));
  for (const auto& t : ckpt.params.tensors()) {
    w.str(t.name);
    w.uint<std::uint8_t>(static_cast<std::uint8_t>(t.group));
    w.uint<std::uint8_t>(t.decay ? 1 : 0);
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(t.shape.size()));
    for (auto s : t.shape) w.uint<std::uint64_t>(s);
    for (std::size_t i = 0; i < t.size; ++i) w.f64(values[t.offset + i]);
  }
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.arrays.size()));
  for (const auto& [k, v] : ckpt.arrays) {
    w.str(k);
    w.uint<std::uint64_t>(v.size());
    for (double x : v) w.f64(x);
  }

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write {}", tmp.string()));
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    if (!out) throw DataError(fmt::format("failed writing {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
  auto txt = path;
  txt += ".txt";
  std::ofstream side(txt, std::ios::binary);
  side << sidecar(ckpt);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open checkpoint {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  Reader r(ss.str());
  if (r.raw(sizeof kMagic, "magic") != std::string(kMagic, sizeof kMagic)) {
    throw ParseError("magic", "not an mqt checkpoint");
  }
  const auto version = r.uint<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw ParseError("version", fmt::format("unsupported checkpoint version {}", version));
  }
  Checkpoint ck;
  const auto n_meta = r.uint<std::uint32_t>("metadata");
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    auto k = r.str("metadata.key");
    ck.metadata[k] = r.str("metadata.value");
  }
  const auto n_tensors = r.uint<std::uint32_t>("tensors");
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    const auto name = r.str("tensor.name");
    const auto group = r.uint<std::uint8_t>("tensor.group");
    const auto decay = r.uint<std::uint8_t>("tensor.decay");
    if (group > 1) throw ParseError(name + ".group", "unknown parameter group");
    const auto rank = r.uint<std::uint32_t>("tensor.rank");
    std::vector<std::size_t> shape;
    std::size_t size = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      shape.push_back(r.uint<std::uint64_t>("tensor.shape"));
      size *= shape.back();
    }
    r.need(size * 8, "tensor.values");
    auto span = ck.params.add(name, shape, static_cast<ParamGroup>(group), decay != 0);
    for (std::size_t j = 0; j < size; ++j) span[j] = r.f64("tensor.values");
  }
  const auto n_arrays = r.uint<std::uint32_t>("arrays");
  for (std::uint32_t i = 0; i < n_arrays; ++i) {
    const auto name = r.str("array.name");
    const auto n = r.uint<std::uint64_t>("array.length");
    r.need(n * 8, "array.values");
    std::vector<double> v(n);
    for (auto& x : v) x = r.f64("array.values");
    ck.arrays[name] = std::move(v);
  }
  if (!r.done()) throw ParseError("trailer", "unexpected bytes after the last array");
  return ck;
}

Checkpoint checkpoint_from_state(const TrainState& state,
                                 std::map<std::string, std::string> metadata) {
  Checkpoint ck;
  ck.metadata = std::move(metadata);
  ck.params = state.params;
  ck.metadata["iteration"] = std::to_string(state.iteration);
  ck.metadata["adam_t"] = std::to_string(state.adam.t);
  std::ostringstream rng;
  rng << state.rng;
  ck.metadata["rng_state"] = rng.str();
  if (!state.adam.m.empty()) {
    ck.arrays["adam.m"] = state.adam.m;
    ck.arrays["adam.v"] = state.adam.v;
  }
  // The run record travels with the checkpoint so a resumed run emits the
  // same record as an uninterrupted one.
  const auto& rows = state.record.rows;
  std::vector<std::string> names;
  auto column = [&](const char* key, auto field) {
    std::vector<double> col;
    for (const auto& row : rows) col.push_back(static_cast<double>(field(row)));
    ck.arrays[std::string("record.") + key] = std::move(col);
  };
  column("iteration", [](const IterationRecord& x) { return x.iteration; });
  column("r", [](const IterationRecord& x) { return x.r; });
  column("r_grid", [](const IterationRecord& x) { return x.r_grid; });
  column("energy", [](const IterationRecord& x) { return x.energy; });
  column("grad_norm_upstream", [](const IterationRecord& x) { return x.grad_norm_upstream; });
  column("grad_norm_downstream", [](const IterationRecord& x) { return x.grad_norm_downstream; });
  column("discarded_mass", [](const IterationRecord& x) { return x.discarded_mass; });
  column("wall_seconds", [](const IterationRecord& x) { return x.wall_seconds; });
  for (const auto& row : rows) names.push_back(row.molecule);
  ck.metadata["record.molecules"] = fmt::format("{}", fmt::join(names, ","));
  return ck;
}

TrainState state_from_checkpoint(const Checkpoint& ckpt) {
  TrainState st;
  st.params = ckpt.params;
  auto get = [&](const char* key) -> const std::string* {
    auto it = ckpt.metadata.find(key);
    return it == ckpt.metadata.end() ? nullptr : &it->second;
  };
  try {
    if (const auto* s = get("iteration")) st.iteration = std::stoi(*s);
    if (const auto* s = get("adam_t")) st.adam.t = std::stoll(*s);
  } catch (const std::exception&) {
    throw ParseError("metadata", "iteration counters are not integers");
  }
  if (const auto* s = get("rng_state")) {
    std::istringstream in(*s);
    in >> st.rng;
    if (!in) throw ParseError("metadata.rng_state", "unreadable generator state");
  }
  auto m = ckpt.arrays.find("adam.m");
  auto v = ckpt.arrays.find("adam.v");
  if (m != ckpt.arrays.end() && v != ckpt.arrays.end()) {
    if (m->second.size() != st.params.size() || v->second.size() != st.params.size()) {
      throw ParseError("arrays", "optimizer moments do not match the parameter count");
    }
    st.adam.m = m->second;
    st.adam.v = v->second;
  }

  auto col = [&](const char* key) -> const std::vector<double>& {
    static const std::vector<double> empty;
    auto it = ckpt.arrays.find(std::string("record.") + key);
    return it == ckpt.arrays.end() ? empty : it->second;
  };
  const auto& iters = col("iteration");
  std::vector<std::string> names;
  if (const auto* s = get("record.molecules"); s && !s->empty()) {
    std::stringstream list(*s);
    for (std::string item; std::getline(list, item, ',');) names.push_back(item);
  }
  const char* keys[] = {"r", "r_grid", "energy", "grad_norm_upstream", "grad_norm_downstream",
                        "discarded_mass", "wall_seconds"};
  for (const char* k : keys) {
    if (col(k).size() != iters.size()) throw ParseError(k, "record columns differ in length");
  }
  if (names.size() != iters.size()) throw ParseError("record.molecules", "length mismatch");
  for (std::size_t i = 0; i < iters.size(); ++i) {
    IterationRecord row;
    row.iteration = static_cast<int>(iters[i]);
    row.molecule = names[i];
    row.r = col("r")[i];
    row.r_grid = col("r_grid")[i];
    row.energy = col("energy")[i];
    row.grad_norm_upstream = col("grad_norm_upstream")[i];
    row.grad_norm_downstream = col("grad_norm_downstream")[i];
    row.discarded_mass = col("discarded_mass")[i];
    row.wall_seconds = col("wall_seconds")[i];
    st.record.rows.push_back(std::move(row));
  }
  st.record.final_checksum = st.params.checksum();
  return st;
}

}  // namespace mqt
