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
#include <vector>

#include "dctts/dsp/spectrogram.hpp"

namespace dctts::dsp {

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters equally spaced on the mel scale over [0, sr/2], each
// peak-normalized to 1.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t bands = kMelBands, std::size_t bins = kLinearBins, int sample_rate = kSampleRate);

  std::size_t bands() const { return bands_; }
  std::size_t bins() const { return bins_; }
  float weight(std::size_t band, std::size_t bin) const { return weights_[band * bins_ + bin]; }
  // Center frequency of a band in Hz.
  double center_hz(std::size_t band) const { return edges_hz_[band + 1]; }

  // Linear projection, no renormalization: (bands x frames).
  Spectrogram apply(const Spectrogram& linear) const;

  static const MelFilterbank& standard();

 private:
  std::size_t bands_;
  std::size_t bins_;
  std::vector<double> edges_hz_;
  std::vector<float> weights_;
  std::vector<std::size_t> first_bin_, last_bin_;
};

// Keeps frames 0, 4, 8, ...; ceil(frames / 4) frames result.
Spectrogram decimate_frames(const Spectrogram& s, std::size_t factor = kDecimation);

// Filterbank projection of a normalized linear spectrogram, decimation, and
// renormalization (S / max S)^gamma.
Spectrogram mel_project(const Spectrogram& linear_normalized, float gamma = kPreEmphasis,
                        const MelFilterbank& fb = MelFilterbank::standard());

}  // namespace dctts::dsp
