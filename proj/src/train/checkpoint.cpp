// Copyright 2026 The dctts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dctts/train/checkpoint.hpp"

#include <map>
#include <set>

#include "dctts/error.hpp"
#include "dctts/train/tensor_file.hpp"

namespace dctts::train {
namespace {

using ad::Tensor;

// Integers travel as 16-bit chunks, each exact in a float32.
Tensor pack_u64(std::uint64_t v) {
  Tensor t({1, 1, 4});
  for (std::size_t i = 0; i < 4; ++i) t[i] = static_cast<float>((v >> (16 * (3 - i))) & 0xFFFFu);
  return t;
}

std::uint64_t unpack_u64(const Tensor& t, const std::string& name) {
  if (t.size() != 4) throw DataError("checkpoint: malformed integer field " + name);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const float chunk = t[i];
    if (!(chunk >= 0.0f && chunk <= 65535.0f) || chunk != static_cast<float>(static_cast<std::uint32_t>(chunk))) {
      throw DataError("checkpoint: malformed integer field " + name);
    }
    v = (v << 16) | static_cast<std::uint64_t>(chunk);
  }
  return v;
}

Tensor pack_hparams(const net::HyperParams& h) {
  return Tensor({1, 1, 6}, std::vector<float>{float(h.embed), float(h.hidden), float(h.ssrn), float(h.mel_bands),
                                              float(h.linear_bins), float(h.vocab)});
}

net::HyperParams unpack_hparams(const Tensor& t) {
  if (t.size() != 6) throw DataError("checkpoint: malformed meta.hparams");
  net::HyperParams h;
  h.embed = static_cast<std::size_t>(t[0]);
  h.hidden = static_cast<std::size_t>(t[1]);
  h.ssrn = static_cast<std::size_t>(t[2]);
  h.mel_bands = static_cast<std::size_t>(t[3]);
  h.linear_bins = static_cast<std::size_t>(t[4]);
  h.vocab = static_cast<std::size_t>(t[5]);
  return h;
}

using TensorMap = std::map<std::string, Tensor>;

TensorMap read_map(const std::filesystem::path& path) {
  TensorMap m;
  for (auto& t : read_tensor_file(path)) {
    if (!m.emplace(t.name, std::move(t.value)).second) {
      throw DataError(path.string() + ": duplicate tensor '" + t.name + "'");
    }
  }
  return m;
}

const Tensor& need(const TensorMap& m, const std::string& name, const std::filesystem::path& path) {
  const auto it = m.find(name);
  if (it == m.end()) throw DataError(path.string() + ": missing tensor '" + name + "'");
  return it->second;
}

CheckpointMeta parse_meta(const TensorMap& m, const std::filesystem::path& path) {
  CheckpointMeta meta;
  const auto kind = unpack_u64(need(m, "meta.kind", path), "meta.kind");
  if (kind != 1 && kind != 2) throw DataError(path.string() + ": unknown model kind");
  meta.kind = static_cast<ModelKind>(kind);
  meta.hparams = unpack_hparams(need(m, "meta.hparams", path));
  meta.iteration = unpack_u64(need(m, "meta.iteration", path), "meta.iteration");
  meta.seed = unpack_u64(need(m, "meta.seed", path), "meta.seed");
  return meta;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ad::ParameterSet& params, const CheckpointMeta& meta) {
  std::vector<NamedTensor> out;
  out.push_back({"meta.kind", pack_u64(static_cast<std::uint64_t>(meta.kind))});
  out.push_back({"meta.hparams", pack_hparams(meta.hparams)});
  out.push_back({"meta.iteration", pack_u64(meta.iteration)});
  out.push_back({"meta.seed", pack_u64(meta.seed)});
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    out.push_back({p.name, p.value});
    out.push_back({p.name + ".adam_m", p.adam_m});
    out.push_back({p.name + ".adam_v", p.adam_v});
    out.push_back({p.name + ".adam_step", pack_u64(p.step_count)});
  }
  write_tensor_file(path, out);
}

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path) { return parse_meta(read_map(path), path); }

CheckpointMeta load_checkpoint(const std::filesystem::path& path, ad::ParameterSet& params) {
  const TensorMap m = read_map(path);
  const CheckpointMeta meta = parse_meta(m, path);

  std::set<std::string> expected = {"meta.kind", "meta.hparams", "meta.iteration", "meta.seed"};
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    for (const char* suffix : {"", ".adam_m", ".adam_v", ".adam_step"}) expected.insert(p.name + suffix);
    for (const char* suffix : {"", ".adam_m", ".adam_v"}) {
      const Tensor& t = need(m, p.name + suffix, path);
      if (t.shape() != p.value.shape()) {
        throw DataError(path.string() + ": tensor '" + p.name + suffix + "' has shape " + ad::to_string(t.shape()) +
                        ", model expects " + ad::to_string(p.value.shape()));
      }
    }
    unpack_u64(need(m, p.name + ".adam_step", path), p.name + ".adam_step");
  }
  for (const auto& [name, t] : m) {
    if (!expected.count(name)) throw DataError(path.string() + ": unexpected tensor '" + name + "' for this model");
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    p.value = m.at(p.name);
    p.adam_m = m.at(p.name + ".adam_m");
    p.adam_v = m.at(p.name + ".adam_v");
    p.step_count = unpack_u64(m.at(p.name + ".adam_step"), p.name);
    p.zero_grad();
  }
  return meta;
}

}  // namespace dctts::train
