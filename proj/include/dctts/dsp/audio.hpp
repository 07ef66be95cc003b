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
#include <filesystem>
#include <vector>

namespace dctts::dsp {

inline constexpr int kSampleRate = 22050;
inline constexpr std::size_t kFftSize = 1024;
inline constexpr std::size_t kHopSize = 256;
inline constexpr std::size_t kLinearBins = kFftSize / 2 + 1;  // 513
inline constexpr std::size_t kMelBands = 80;
inline constexpr std::size_t kDecimation = 4;
inline constexpr float kPreEmphasis = 0.6f;   // gamma
inline constexpr float kPostEmphasis = 1.3f;  // eta

struct Waveform {
  std::vector<float> samples;
  int sample_rate = kSampleRate;
};

// RIFF PCM, 16-bit signed little-endian, mono. Throws DataError on anything else.
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace dctts::dsp
