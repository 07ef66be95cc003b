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
#include <filesystem>
#include <string>
#include <vector>

#include "dctts/dsp/audio.hpp"

namespace dctts::io {

// Synthetic speech stand-in: every letter is a steady tone at its own
// mel-spaced frequency lasting `frames_per_char` mel frames, a space is
// silence of half that length, and the clip ends with `tail_frames` of silence.
struct ToyVoice {
  std::size_t frames_per_char = 4;
  std::size_t tail_frames = 4;
  float amplitude = 0.5f;
};

dsp::Waveform toy_waveform(const std::string& normalized_text, const ToyVoice& voice = {});

// Random transcripts of `min_words`..`max_words` words of 1..`max_word` letters
// drawn from `alphabet`.
struct ToyCorpusSpec {
  std::size_t clips = 50;
  std::size_t min_words = 2;
  std::size_t max_words = 2;
  std::size_t max_word = 4;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::uint64_t seed = 1;
  ToyVoice voice;
};

std::vector<std::string> toy_transcripts(const ToyCorpusSpec& spec);

// Writes <dir>/metadata.csv and <dir>/wavs/<id>.wav; returns the metadata path.
std::filesystem::path write_toy_corpus(const std::filesystem::path& dir, const ToyCorpusSpec& spec);

}  // namespace dctts::io
