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

#include "dctts/train/batch.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "dctts/dsp/audio.hpp"
#include "dctts/dsp/mel.hpp"
#include "dctts/loss/losses.hpp"
#include "dctts/net/layers.hpp"

namespace dctts::train {

Example make_example(std::string id, const std::string& normalized_text, const dsp::Spectrogram& linear_normalized) {
  if (linear_normalized.bins != dsp::kLinearBins || linear_normalized.frames == 0) {
    throw std::invalid_argument("make_example: expected a (513 x frames) linear spectrogram");
  }
  Example ex;
  ex.id = std::move(id);
  ex.text = text::encode(normalized_text);
  ex.mel = dsp::mel_project(linear_normalized);
  const std::size_t frames = ex.mel.frames * dsp::kDecimation;
  ex.linear = dsp::Spectrogram(dsp::kLinearBins, frames, 0.0f);
  for (std::size_t f = 0; f < dsp::kLinearBins; ++f)
    for (std::size_t t = 0; t < linear_normalized.frames; ++t) ex.linear(f, t) = linear_normalized(f, t);
  return ex;
}

Text2MelBatch make_batch(std::span<const Example* const> examples) {
  if (examples.empty()) throw std::invalid_argument("make_batch: empty batch");
  Text2MelBatch b;
  b.batch = examples.size();
  for (const Example* ex : examples) {
    const std::size_t n = text::unpadded_length(ex->text);
    if (n == 0 || ex->mel.frames == 0) {
      throw std::invalid_argument("make_batch: example '" + ex->id + "' has no text or no frames");
    }
    if (ex->mel.bins != dsp::kMelBands) throw std::invalid_argument("make_batch: mel must have 80 bands");
    b.text_lengths.push_back(n);
    b.frame_lengths.push_back(ex->mel.frames);
    b.max_chars = std::max(b.max_chars, n);
    b.max_frames = std::max(b.max_frames, ex->mel.frames);
  }
  const std::size_t F = dsp::kMelBands, N = b.max_chars, T = b.max_frames;
  b.text.assign(b.batch * N, text::kNull);
  b.text_mask.assign(b.batch * N, 0);
  b.mel_input = Tensor({b.batch, F, T});
  b.mel_target = Tensor({b.batch, F, T});
  b.mask = Tensor({b.batch, F, T});
  for (std::size_t i = 0; i < b.batch; ++i) {
    const Example& ex = *examples[i];
    for (std::size_t n = 0; n < b.text_lengths[i]; ++n) {
      b.text[i * N + n] = ex.text[n];
      b.text_mask[i * N + n] = 1;
    }
    const std::size_t len = b.frame_lengths[i];
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t t = 0; t < len; ++t) {
        b.mel_target(i, f, t) = ex.mel(f, t);
        b.mask(i, f, t) = 1.0f;
        if (t + 1 < T) b.mel_input(i, f, t + 1) = ex.mel(f, t);
      }
    }
    b.mask_count += static_cast<double>(F * len);
    b.guided_count += static_cast<double>(b.text_lengths[i] * len);
  }
  b.guided = loss::guided_weights(b.text_lengths, b.frame_lengths, N, T);
  return b;
}

std::size_t crop_offset(std::size_t frames, std::size_t crop, std::uint64_t seed) {
  if (frames <= crop) return 0;
  std::mt19937_64 rng(seed);
  return std::uniform_int_distribution<std::size_t>(0, frames - crop)(rng);
}

SsrnBatch make_ssrn_batch(std::span<const Example* const> examples, std::size_t crop, std::uint64_t seed) {
  if (examples.empty()) throw std::invalid_argument("make_ssrn_batch: empty batch");
  if (crop == 0) throw std::invalid_argument("make_ssrn_batch: crop must be positive");
  constexpr std::size_t up = dsp::kDecimation;
  SsrnBatch b;
  b.batch = examples.size();
  b.crop = crop;
  b.mel = Tensor({b.batch, dsp::kMelBands, crop});
  b.linear = Tensor({b.batch, dsp::kLinearBins, up * crop});
  b.mask = Tensor({b.batch, dsp::kLinearBins, up * crop});
  for (std::size_t i = 0; i < b.batch; ++i) {
    const Example& ex = *examples[i];
    if (ex.linear.frames != up * ex.mel.frames) {
      throw std::invalid_argument("make_ssrn_batch: example '" + ex.id + "' linear frames are not 4x mel frames");
    }
    const std::size_t off = crop_offset(ex.mel.frames, crop, net::mix_seed(seed, i));
    const std::size_t len = std::min(crop, ex.mel.frames - off);
    b.offsets.push_back(off);
    for (std::size_t f = 0; f < dsp::kMelBands; ++f)
      for (std::size_t t = 0; t < len; ++t) b.mel(i, f, t) = ex.mel(f, off + t);
    for (std::size_t f = 0; f < dsp::kLinearBins; ++f)
      for (std::size_t t = 0; t < up * len; ++t) {
        b.linear(i, f, t) = ex.linear(f, up * off + t);
        b.mask(i, f, t) = 1.0f;
      }
    b.mask_count += static_cast<double>(dsp::kLinearBins * up * len);
  }
  return b;
}

}  // namespace dctts::train
