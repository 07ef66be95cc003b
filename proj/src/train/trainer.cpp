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

#include "dctts/train/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "dctts/error.hpp"
#include "dctts/ops.hpp"

namespace dctts::train {
namespace {

using Var = ad::Var<float>;

struct Evaluated {
  LossReport report;
  Var total;
};

Evaluated text2mel_losses(const net::Text2Mel& model, ad::Tape<float>& tape, const Text2MelBatch& b, bool guided) {
  const auto out = model.forward(tape, b.text, b.batch, tape.constant(b.mel_input));
  const auto spec = loss::spec_loss(out.logits, out.mel, b.mel_target, b.mask);
  const auto att = loss::guided_attention_loss(out.alignment, b.guided, b.guided_count);
  Evaluated e;
  e.total = guided ? ad::add(spec.total, att) : spec.total;
  e.report.l1 = spec.l1.value()[0];
  e.report.bin_div = spec.bin_div.value()[0];
  e.report.attention = att.value()[0];
  e.report.total = e.total.value()[0];
  return e;
}

Evaluated ssrn_losses(const net::Ssrn& model, ad::Tape<float>& tape, const SsrnBatch& b) {
  const auto logits = model.forward_logits(tape, tape.constant(b.mel));
  const auto spec = loss::spec_loss(logits, ad::sigmoid(logits), b.linear, b.mask);
  Evaluated e;
  e.total = spec.total;
  e.report.l1 = spec.l1.value()[0];
  e.report.bin_div = spec.bin_div.value()[0];
  e.report.total = spec.total.value()[0];
  return e;
}

void check_finite(const LossReport& r, std::uint64_t iteration) {
  if (!r.finite()) {
    throw NumericError("non-finite loss at iteration " + std::to_string(iteration) + " (total " +
                       std::to_string(r.total) + ")");
  }
}

void apply(ad::ParameterSet& params, ad::Tape<float>& tape, Var total, const ad::AdamConfig& adam) {
  params.zero_grad();
  tape.backward(total);
  ad::adam_step(params, adam);
}

CheckpointMeta meta_for(ModelKind kind, const TrainConfig& c, std::uint64_t iteration) {
  CheckpointMeta m;
  m.kind = kind;
  m.hparams = c.hparams;
  m.iteration = iteration;
  m.seed = c.seed;
  return m;
}

void check_meta(const CheckpointMeta& meta, const TrainConfig& config, const std::filesystem::path& path) {
  if (!(meta.hparams == config.hparams)) {
    throw DataError(path.string() + ": checkpoint hyperparameters differ from the configured model");
  }
}

void log_line(std::ostream* log, std::uint64_t iter, const LossReport& r, double seconds) {
  if (!log) return;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%.6f,%.6f,%.3f\n", static_cast<unsigned long long>(iter), r.total,
                r.l1, r.bin_div, r.attention, seconds);
  *log << buf << std::flush;
}

template <typename Trainer, typename MakeBatch>
LossReport loop(Trainer& trainer, const std::vector<Example>& examples, const LoopOptions& options,
                MakeBatch make) {
  if (examples.empty()) throw DataError("training: empty corpus");
  const auto& config = trainer.config();
  const BatchSampler sampler(examples.size(), config.batch_size, config.seed);
  const auto start = std::chrono::steady_clock::now();
  LossReport last;
  std::vector<const Example*> picked;
  while (trainer.iteration() < options.max_iters) {
    const std::uint64_t it = trainer.iteration();
    picked.clear();
    for (std::size_t i : sampler.indices(it)) picked.push_back(&examples[i]);
    last = trainer.step(make(picked, it));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log_line(options.log, trainer.iteration(), last, secs);
    if (!options.snapshot_path.empty() && trainer.iteration() % config.snapshot_every == 0) {
      trainer.save(options.snapshot_path);
    }
  }
  if (!options.snapshot_path.empty()) trainer.save(options.snapshot_path);
  return last;
}

}  // namespace

Text2MelTrainer::Text2MelTrainer(const TrainConfig& config) : config_(config), model_(config.hparams, config.seed) {}

LossReport Text2MelTrainer::step(const Text2MelBatch& batch) {
  ad::Tape<float> tape;
  const auto e = text2mel_losses(model_, tape, batch, config_.guided_attention);
  check_finite(e.report, iteration_);
  apply(model_.params(), tape, e.total, config_.adam);
  ++iteration_;
  return e.report;
}

LossReport Text2MelTrainer::evaluate(const Text2MelBatch& batch) const {
  ad::Tape<float> tape;
  return text2mel_losses(model_, tape, batch, config_.guided_attention).report;
}

void Text2MelTrainer::save(const std::filesystem::path& path) const {
  save_checkpoint(path, model_.params(), meta_for(ModelKind::text2mel, config_, iteration_));
}

void Text2MelTrainer::load(const std::filesystem::path& path) {
  check_meta(read_checkpoint_meta(path), config_, path);
  iteration_ = load_checkpoint(path, model_.params()).iteration;
}

SsrnTrainer::SsrnTrainer(const TrainConfig& config) : config_(config), model_(config.hparams, config.seed) {}

LossReport SsrnTrainer::step(const SsrnBatch& batch) {
  ad::Tape<float> tape;
  const auto e = ssrn_losses(model_, tape, batch);
  check_finite(e.report, iteration_);
  apply(model_.params(), tape, e.total, config_.adam);
  ++iteration_;
  return e.report;
}

LossReport SsrnTrainer::evaluate(const SsrnBatch& batch) const {
  ad::Tape<float> tape;
  return ssrn_losses(model_, tape, batch).report;
}

void SsrnTrainer::save(const std::filesystem::path& path) const {
  save_checkpoint(path, model_.params(), meta_for(ModelKind::ssrn, config_, iteration_));
}

void SsrnTrainer::load(const std::filesystem::path& path) {
  check_meta(read_checkpoint_meta(path), config_, path);
  iteration_ = load_checkpoint(path, model_.params()).iteration;
}

std::uint64_t crop_seed(std::uint64_t run_seed, std::uint64_t iteration) {
  return net::mix_seed(run_seed ^ 0x5353524e43524f50ULL, iteration);
}

LossReport run_training(Text2MelTrainer& trainer, const std::vector<Example>& examples, const LoopOptions& options) {
  return loop(trainer, examples, options,
              [](const std::vector<const Example*>& picked, std::uint64_t) { return make_batch(picked); });
}

LossReport run_training(SsrnTrainer& trainer, const std::vector<Example>& examples, const LoopOptions& options) {
  const std::size_t crop = trainer.config().ssrn_crop;
  const std::uint64_t seed = trainer.config().seed;
  return loop(trainer, examples, options, [crop, seed](const std::vector<const Example*>& picked, std::uint64_t it) {
    return make_ssrn_batch(picked, crop, crop_seed(seed, it));
  });
}

}  // namespace dctts::train
