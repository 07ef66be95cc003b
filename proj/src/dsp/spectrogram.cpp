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

#include "dctts/dsp/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dctts/error.hpp"
#include "frame_transform.hpp"

namespace dctts::dsp {

float Spectrogram::max() const {
  float m = 0.0f;
  for (float v : values) m = std::max(m, v);
  return m;
}

const std::vector<double>& hann_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kFftSize);
    for (std::size_t n = 0; n < kFftSize; ++n)
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(kFftSize));
    return w;
  }();
  return window;
}

std::size_t frame_count(std::size_t samples) { return samples / kHopSize + 1; }

namespace detail {

std::vector<double> window_square_sum(std::size_t frames) {
  const auto& w = hann_window();
  std::vector<double> sum((frames - 1) * kHopSize + kFftSize, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t n = 0; n < kFftSize; ++n) sum[t * kHopSize + n] += w[n] * w[n];
  return sum;
}

}  // namespace detail

ComplexSpectrogram stft(std::span<const float> samples) {
  constexpr std::size_t pad = kFftSize / 2;
  const std::size_t len = samples.size();
  if (len <= pad) {
    throw DataError("waveform of " + std::to_string(len) + " samples is too short for one window (needs > " +
                    std::to_string(pad) + ")");
  }
  std::vector<double> padded(len + 2 * pad);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    auto j = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad);
    if (j < 0) j = -j;
    const auto last = static_cast<std::ptrdiff_t>(len) - 1;
    if (j > last) j = 2 * last - j;
    padded[i] = samples[static_cast<std::size_t>(j)];
  }

  ComplexSpectrogram z;
  z.frames = frame_count(len);
  z.values.resize(kLinearBins * z.frames);
  detail::FrameTransform ft;
  std::vector<std::complex<double>> spec(kLinearBins);
  for (std::size_t t = 0; t < z.frames; ++t) {
    ft.analyze(padded.data() + t * kHopSize, spec.data());
    for (std::size_t f = 0; f < kLinearBins; ++f) z(f, t) = std::complex<float>(spec[f]);
  }
  return z;
}

std::vector<double> overlap_add(const ComplexSpectrogram& z) {
  if (z.bins != kLinearBins || z.frames == 0 || z.values.size() != z.bins * z.frames) {
    throw std::invalid_argument("istft: expected a (513 x frames) spectrogram with frames >= 1");
  }
  std::vector<double> out((z.frames - 1) * kHopSize + kFftSize, 0.0);
  detail::FrameTransform ft;
  std::vector<std::complex<double>> spec(kLinearBins);
  for (std::size_t t = 0; t < z.frames; ++t) {
    for (std::size_t f = 0; f < kLinearBins; ++f) spec[f] = std::complex<double>(z(f, t));
    ft.synthesize_add(spec.data(), out.data() + t * kHopSize);
  }
  return out;
}

std::vector<float> istft(const ComplexSpectrogram& z) {
  const std::vector<double> ola = overlap_add(z);
  const std::vector<double> wsum = detail::window_square_sum(z.frames);
  constexpr std::size_t pad = kFftSize / 2;
  std::vector<float> out((z.frames - 1) * kHopSize);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = wsum[i + pad];
    out[i] = d > 1e-10 ? static_cast<float>(ola[i + pad] / d) : 0.0f;
  }
  return out;
}

Spectrogram magnitude(const ComplexSpectrogram& z) {
  Spectrogram m(z.bins, z.frames);
  for (std::size_t i = 0; i < z.values.size(); ++i) m.values[i] = std::abs(z.values[i]);
  return m;
}

Spectrogram normalize_magnitude(const Spectrogram& mag, float gamma) {
  Spectrogram out = mag;
  const float peak = mag.max();
  if (peak <= 0.0f) {
    std::fill(out.values.begin(), out.values.end(), 0.0f);
    return out;
  }
  for (auto& v : out.values) v = std::pow(std::max(v, 0.0f) / peak, gamma);
  return out;
}

Spectrogram denormalize_magnitude(const Spectrogram& mag, float gamma, float eta) {
  Spectrogram out = mag;
  const float exponent = eta / gamma;
  for (auto& v : out.values) v = std::pow(std::max(v, 0.0f), exponent);
  return out;
}

}  // namespace dctts::dsp
