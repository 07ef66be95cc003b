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

// ||  |STFT(x)| - |Z|  || / || |Z| ||, with STFT taken by stft().
double spectral_convergence(const Spectrogram& target, std::span<const float> waveform);

struct GriffinLimResult {
  std::vector<float> waveform;
  // Inconsistency after each iteration, with bins weighted so the norm equals
  // the windowed frame energy.
  std::vector<double> convergence;
};

// Offline alternating projection. The estimate is constrained to signals of
// (frames - 1) * hop samples, reflection-padded like stft().
GriffinLimResult griffin_lim(const Spectrogram& magnitudes, int iterations);

// Online variant: frames are committed left to right; before each commit the
// `lookahead` uncommitted frames are refined with `iterations` projections.
std::vector<float> rtisi_la(const Spectrogram& magnitudes, int lookahead = 100, int iterations = 10);

}  // namespace dctts::dsp
