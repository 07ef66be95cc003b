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
#include <span>
#include <string>
#include <vector>

#include "dctts/dsp/spectrogram.hpp"
#include "dctts/tensor.hpp"
#include "dctts/text/vocab.hpp"

namespace dctts::train {

using ad::Tensor;

// One training pair. `linear` is zero-padded so its frame count is exactly
// 4 x mel frames.
struct Example {
  std::string id;
  text::EncodedText text;
  dsp::Spectrogram mel;     // (80, T), normalized
  dsp::Spectrogram linear;  // (513, 4T), normalized
};

// Builds the mel target from a normalized linear spectrogram and pads the
// linear frames up to a multiple of four.
Example make_example(std::string id, const std::string& normalized_text, const dsp::Spectrogram& linear_normalized);

// Teacher-forced Text2Mel batch. Column t of `mel_input` holds ground-truth
// frame t - 1 (an all-zero frame for t = 0) and column t of `mel_target`
// holds frame t, so prediction t is scored against the frame after its input.
struct Text2MelBatch {
  std::size_t batch = 0;
  std::size_t max_chars = 0;
  std::size_t max_frames = 0;
  std::vector<std::int32_t> text;          // (batch, max_chars), NULL padded
  std::vector<std::uint8_t> text_mask;     // (batch, max_chars)
  std::vector<std::size_t> text_lengths;
  std::vector<std::size_t> frame_lengths;
  Tensor mel_input;   // (batch, 80, max_frames)
  Tensor mel_target;  // (batch, 80, max_frames)
  Tensor mask;        // (batch, 80, max_frames), 1 on real frames
  Tensor guided;      // (batch, max_chars, max_frames), zero outside each example
  double mask_count = 0.0;    // 80 * sum of frame lengths
  double guided_count = 0.0;  // sum of N_b * T_b
};

// Throws std::invalid_argument on an empty batch or an example without text or frames.
Text2MelBatch make_batch(std::span<const Example* const> examples);

// Aligned random crops for SSRN: `crop` mel frames and 4 x crop linear frames
// per example. Clips shorter than the crop are zero-padded and masked.
struct SsrnBatch {
  std::size_t batch = 0;
  std::size_t crop = 0;
  std::vector<std::size_t> offsets;  // mel frame offset of each crop
  Tensor mel;     // (batch, 80, crop)
  Tensor linear;  // (batch, 513, 4 crop)
  Tensor mask;    // (batch, 513, 4 crop)
  double mask_count = 0.0;
};

// Uniform offset in [0, frames - crop], or 0 when the clip is shorter.
std::size_t crop_offset(std::size_t frames, std::size_t crop, std::uint64_t seed);

// Crop offsets are drawn from `seed` and the position in the batch.
SsrnBatch make_ssrn_batch(std::span<const Example* const> examples, std::size_t crop, std::uint64_t seed);

}  // namespace dctts::train
