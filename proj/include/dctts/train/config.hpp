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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dctts/net/hparams.hpp"
#include "dctts/optim.hpp"

namespace dctts::train {

struct TrainConfig {
  std::size_t batch_size = 16;
  ad::AdamConfig adam;
  std::uint64_t snapshot_every = 5000;
  std::size_t ssrn_crop = 64;
  std::uint64_t seed = 1;
  std::uint64_t max_iters = 5000;
  bool guided_attention = true;
  net::HyperParams hparams;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// JSON keys mirror the field names; "adam" holds alpha, beta1, beta2,
// epsilon and "hparams" holds embed, hidden, ssrn. Keys may be omitted;
// unknown keys are rejected with DataError.
TrainConfig parse_config(const std::string& json_text);
TrainConfig load_config(const std::filesystem::path& path);
std::string to_json(const TrainConfig& config);

// Per-epoch shuffled minibatches. The batch for an iteration depends only on
// (n, batch size, seed, iteration); a trailing partial batch is dropped.
class BatchSampler {
 public:
  BatchSampler(std::size_t examples, std::size_t batch_size, std::uint64_t seed);

  std::size_t batch_size() const { return batch_; }
  std::size_t batches_per_epoch() const { return examples_ / batch_; }
  std::vector<std::size_t> indices(std::uint64_t iteration) const;

 private:
  std::size_t examples_;
  std::size_t batch_;
  std::uint64_t seed_;
};

}  // namespace dctts::train
