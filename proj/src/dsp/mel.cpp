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

#include "dctts/dsp/mel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dctts::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t bands, std::size_t bins, int sample_rate)
    : bands_(bands), bins_(bins), edges_hz_(bands + 2), weights_(bands * bins, 0.0f),
      first_bin_(bands, 0), last_bin_(bands, 0) {
  if (bands == 0 || bins < 2) throw std::invalid_argument("mel filterbank needs bands >= 1 and bins >= 2");
  const double nyquist = sample_rate / 2.0;
  const double top = hz_to_mel(nyquist);
  for (std::size_t i = 0; i < bands + 2; ++i)
    edges_hz_[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(bands + 1));

  const double bin_hz = nyquist / static_cast<double>(bins - 1);
  for (std::size_t m = 0; m < bands; ++m) {
    const double lo = edges_hz_[m], mid = edges_hz_[m + 1], hi = edges_hz_[m + 2];
    first_bin_[m] = bins;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = bin_hz * static_cast<double>(k);
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      if (w > 0.0) {
        weights_[m * bins + k] = static_cast<float>(w);
        first_bin_[m] = std::min(first_bin_[m], k);
        last_bin_[m] = k;
      }
    }
  }
}

const MelFilterbank& MelFilterbank::standard() {
  static const MelFilterbank fb;
  return fb;
}

Spectrogram MelFilterbank::apply(const Spectrogram& linear) const {
  if (linear.bins != bins_) throw std::invalid_argument("mel projection: linear spectrogram must have " +
                                                        std::to_string(bins_) + " bins");
  Spectrogram out(bands_, linear.frames);
  for (std::size_t m = 0; m < bands_; ++m) {
    if (first_bin_[m] >= bins_) continue;
    float* dst = &out(m, 0);
    for (std::size_t k = first_bin_[m]; k <= last_bin_[m]; ++k) {
      const float w = weights_[m * bins_ + k];
      const float* src = &linear.values[k * linear.frames];
      for (std::size_t t = 0; t < linear.frames; ++t) dst[t] += w * src[t];
    }
  }
  return out;
}

Spectrogram decimate_frames(const Spectrogram& s, std::size_t factor) {
  const std::size_t kept = (s.frames + factor - 1) / factor;
  Spectrogram out(s.bins, kept);
  for (std::size_t f = 0; f < s.bins; ++f)
    for (std::size_t t = 0; t < kept; ++t) out(f, t) = s(f, t * factor);
  return out;
}

Spectrogram mel_project(const Spectrogram& linear_normalized, float gamma, const MelFilterbank& fb) {
  return normalize_magnitude(decimate_frames(fb.apply(linear_normalized)), gamma);
}

}  // namespace dctts::dsp
