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

#include "dctts/train/config.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dctts/error.hpp"
#include "dctts/net/layers.hpp"

namespace dctts::train {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw DataError("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

TrainConfig parse_config(const std::string& json_text) {
  TrainConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw DataError("config: top level must be an object");
    reject_unknown(j, {"batch_size", "adam", "snapshot_every", "ssrn_crop", "seed", "max_iters", "guided_attention",
                       "hparams"},
                   "config");
    read(j, "batch_size", c.batch_size);
    read(j, "snapshot_every", c.snapshot_every);
    read(j, "ssrn_crop", c.ssrn_crop);
    read(j, "seed", c.seed);
    read(j, "max_iters", c.max_iters);
    read(j, "guided_attention", c.guided_attention);
    if (j.contains("adam")) {
      const json& a = j.at("adam");
      reject_unknown(a, {"alpha", "beta1", "beta2", "epsilon"}, "adam");
      read(a, "alpha", c.adam.alpha);
      read(a, "beta1", c.adam.beta1);
      read(a, "beta2", c.adam.beta2);
      read(a, "epsilon", c.adam.epsilon);
    }
    if (j.contains("hparams")) {
      const json& h = j.at("hparams");
      reject_unknown(h, {"embed", "hidden", "ssrn"}, "hparams");
      read(h, "embed", c.hparams.embed);
      read(h, "hidden", c.hparams.hidden);
      read(h, "ssrn", c.hparams.ssrn);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (c.batch_size == 0 || c.ssrn_crop == 0 || c.snapshot_every == 0) {
    throw DataError("config: batch_size, ssrn_crop and snapshot_every must be positive");
  }
  if (c.hparams.embed == 0 || c.hparams.hidden == 0 || c.hparams.ssrn == 0) {
    throw DataError("config: hparams must be positive");
  }
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const TrainConfig& c) {
  json j;
  j["batch_size"] = c.batch_size;
  j["adam"] = {{"alpha", c.adam.alpha}, {"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}};
  j["snapshot_every"] = c.snapshot_every;
  j["ssrn_crop"] = c.ssrn_crop;
  j["seed"] = c.seed;
  j["max_iters"] = c.max_iters;
  j["guided_attention"] = c.guided_attention;
  j["hparams"] = {{"embed", c.hparams.embed}, {"hidden", c.hparams.hidden}, {"ssrn", c.hparams.ssrn}};
  return j.dump(2);
}

BatchSampler::BatchSampler(std::size_t examples, std::size_t batch_size, std::uint64_t seed)
    : examples_(examples), batch_(std::min(batch_size, examples)), seed_(seed) {
  if (examples == 0) throw std::invalid_argument("BatchSampler: no examples");
  if (batch_size == 0) throw std::invalid_argument("BatchSampler: batch size must be positive");
}

std::vector<std::size_t> BatchSampler::indices(std::uint64_t iteration) const {
  const std::uint64_t per_epoch = batches_per_epoch();
  const std::uint64_t epoch = iteration / per_epoch;
  const std::uint64_t slot = iteration % per_epoch;
  std::vector<std::size_t> order(examples_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(net::mix_seed(seed_, epoch));
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = examples_; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  const auto begin = order.begin() + static_cast<std::ptrdiff_t>(slot * batch_);
  return {begin, begin + static_cast<std::ptrdiff_t>(batch_)};
}

}  // namespace dctts::train
