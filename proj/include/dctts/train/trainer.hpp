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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "dctts/loss/losses.hpp"
#include "dctts/net/networks.hpp"
#include "dctts/train/batch.hpp"
#include "dctts/train/checkpoint.hpp"
#include "dctts/train/config.hpp"

namespace dctts::train {

using loss::LossReport;

// Owns a Text2Mel model and its optimizer state.
class Text2MelTrainer {
 public:
  explicit Text2MelTrainer(const TrainConfig& config);

  // One ADAM step on the batch. Throws NumericError before touching
  // the parameters when the loss is not finite.
  LossReport step(const Text2MelBatch& batch);
  // Same losses without an update. The attention term is always reported;
  // it enters `total` only when guided attention is enabled.
  LossReport evaluate(const Text2MelBatch& batch) const;

  net::Text2Mel& model() { return model_; }
  const net::Text2Mel& model() const { return model_; }
  const TrainConfig& config() const { return config_; }
  std::uint64_t iteration() const { return iteration_; }

  void save(const std::filesystem::path& path) const;
  // Restores parameters, ADAM state and the iteration counter.
  void load(const std::filesystem::path& path);

 private:
  TrainConfig config_;
  net::Text2Mel model_;
  std::uint64_t iteration_ = 0;
};

class SsrnTrainer {
 public:
  explicit SsrnTrainer(const TrainConfig& config);

  LossReport step(const SsrnBatch& batch);
  LossReport evaluate(const SsrnBatch& batch) const;

  net::Ssrn& model() { return model_; }
  const net::Ssrn& model() const { return model_; }
  const TrainConfig& config() const { return config_; }
  std::uint64_t iteration() const { return iteration_; }

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  TrainConfig config_;
  net::Ssrn model_;
  std::uint64_t iteration_ = 0;
};

// Seed for the SSRN crops of a given iteration.
std::uint64_t crop_seed(std::uint64_t run_seed, std::uint64_t iteration);

struct LoopOptions {
  std::uint64_t max_iters = 0;              // run until trainer.iteration() reaches this
  std::ostream* log = nullptr;              // "iter,loss_total,loss_l1,loss_bin,loss_att,seconds" lines
  std::filesystem::path snapshot_path;      // empty disables snapshots
};

// Runs training from the trainer's current iteration. Batches come from a
// BatchSampler over `examples`, so a resumed run sees the same batches as an
// uninterrupted one. Snapshots are written every config.snapshot_every
// iterations and at the end. Returns the last report.
LossReport run_training(Text2MelTrainer& trainer, const std::vector<Example>& examples, const LoopOptions& options);
LossReport run_training(SsrnTrainer& trainer, const std::vector<Example>& examples, const LoopOptions& options);

// Header line for training logs.
inline constexpr const char* kLogHeader = "iter,loss_total,loss_l1,loss_bin,loss_att,seconds";

}  // namespace dctts::train
