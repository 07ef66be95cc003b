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

#include <cstddef>
#include <span>
#include <vector>

#include "dctts/dsp/audio.hpp"
#include "dctts/dsp/spectrogram.hpp"
#include "dctts/net/networks.hpp"
#include "dctts/text/vocab.hpp"

namespace dctts::synth {

struct SynthesisConfig {
  std::size_t max_frames = 200;
  bool incremental_attention = true;
  // Stop once attention is on the last character and each of the last
  // `stop_lookback` frames has mean value below `stop_energy_threshold`.
  float stop_energy_threshold = 0.02f;
  std::size_t stop_lookback = 10;
  // Reuse per-layer history between steps instead of re-encoding the prefix.
  bool cached = true;
};

struct ConstrainedColumn {
  std::vector<float> column;
  std::size_t position = 0;  // n_t
  bool forced = false;
};

// Keeps the column when its argmax moves by -1..3 from n_prev; otherwise
// returns a one-hot column at min(n_prev + 1, N - 1).
ConstrainedColumn incremental_constraint(std::span<const float> column, std::size_t n_prev);

struct MelSynthesis {
  dsp::Spectrogram mel;          // (80, frames)
  std::size_t chars = 0;         // N
  std::vector<float> alignment;  // (N, frames) row-major, as used for decoding
  std::vector<std::size_t> positions;  // n_t per frame
  bool stopped = false;          // stop rule fired before max_frames
};

// Autoregressive generation starting from an all-zero frame. Throws
// std::invalid_argument for empty text or max_frames == 0 and NumericError
// when the model produces non-finite values.
MelSynthesis synthesize_mel(const net::Text2Mel& model, const text::EncodedText& text, const SynthesisConfig& config);

struct VocoderConfig {
  float gamma = dsp::kPreEmphasis;
  float eta = dsp::kPostEmphasis;
  int lookahead = 100;
  int iterations = 10;
  float peak = 0.95f;
};

// SSRN, |Z|^(eta/gamma), RTISI-LA. The waveform is scaled so that a
// spectrogram whose largest magnitude is 1 peaks at `peak`; quieter
// spectrograms stay proportionally quieter.
dsp::Waveform synthesize_waveform(const dsp::Spectrogram& mel, const net::Ssrn& ssrn, const VocoderConfig& config = {});

// SSRN magnitudes (513, 4T) before denormalization.
dsp::Spectrogram predict_linear(const dsp::Spectrogram& mel, const net::Ssrn& ssrn);

}  // namespace dctts::synth
