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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dctts/dsp/audio.hpp"

namespace dctts::dsp {

// Row-major (bins x frames) real matrix.
struct Spectrogram {
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<float> values;

  Spectrogram() = default;
  Spectrogram(std::size_t b, std::size_t f, float fill = 0.0f) : bins(b), frames(f), values(b * f, fill) {}

  float& operator()(std::size_t f, std::size_t t) { return values[f * frames + t]; }
  float operator()(std::size_t f, std::size_t t) const { return values[f * frames + t]; }
  float max() const;
};

// Row-major (513 x frames) complex STFT.
struct ComplexSpectrogram {
  std::size_t bins = kLinearBins;
  std::size_t frames = 0;
  std::vector<std::complex<float>> values;

  std::complex<float>& operator()(std::size_t f, std::size_t t) { return values[f * frames + t]; }
  std::complex<float> operator()(std::size_t f, std::size_t t) const { return values[f * frames + t]; }
};

// Periodic Hann window of length kFftSize.
const std::vector<double>& hann_window();

// Frame count of stft() for a waveform of `samples` samples.
std::size_t frame_count(std::size_t samples);

// Hann-windowed STFT (1024/256) after 512-sample reflection padding on both sides.
ComplexSpectrogram stft(std::span<const float> samples);

// Weighted overlap-add inverse of stft(); returns (frames - 1) * 256 samples.
std::vector<float> istft(const ComplexSpectrogram& z);

// Raw overlap-add of windowed inverse frames, no window-sum division and no
// trimming of the reflection padding. Length (frames - 1) * 256 + 1024.
std::vector<double> overlap_add(const ComplexSpectrogram& z);

Spectrogram magnitude(const ComplexSpectrogram& z);

// (|Z| / max|Z|)^gamma. An all-zero input maps to all zeros.
Spectrogram normalize_magnitude(const Spectrogram& mag, float gamma = kPreEmphasis);
// |Z|^(eta / gamma).
Spectrogram denormalize_magnitude(const Spectrogram& mag, float gamma = kPreEmphasis,
                                  float eta = kPostEmphasis);

}  // namespace dctts::dsp
