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

#include "dctts/io/toy_corpus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "dctts/dsp/mel.hpp"
#include "dctts/error.hpp"
#include "dctts/text/vocab.hpp"

namespace dctts::io {
namespace {

// Letters and punctuation map to mel-equispaced pitches between 200 Hz and 6 kHz.
double symbol_hz(std::int32_t index) {
  const double lo = dsp::hz_to_mel(200.0), hi = dsp::hz_to_mel(6000.0);
  const double u = double(index - 2) / double(text::kVocabSize - 3);
  return dsp::mel_to_hz(lo + u * (hi - lo));
}

}  // namespace

dsp::Waveform toy_waveform(const std::string& normalized_text, const ToyVoice& voice) {
  const std::size_t per_char = voice.frames_per_char * dsp::kDecimation * dsp::kHopSize;
  const std::size_t ramp = 220;  // 10 ms fade in and out
  dsp::Waveform w;
  for (char c : normalized_text) {
    const std::int32_t idx = text::char_index(c);
    if (idx < 0) throw std::invalid_argument("toy_waveform: text is not normalized");
    if (idx == text::kSpace) {
      w.samples.insert(w.samples.end(), per_char / 2, 0.0f);
      continue;
    }
    const double hz = symbol_hz(idx);
    for (std::size_t i = 0; i < per_char; ++i) {
      const double edge = std::min({1.0, double(i) / ramp, double(per_char - 1 - i) / ramp});
      const double env = 0.5 - 0.5 * std::cos(std::numbers::pi * edge);
      w.samples.push_back(static_cast<float>(voice.amplitude * env *
                                             std::sin(2.0 * std::numbers::pi * hz * double(i) / dsp::kSampleRate)));
    }
  }
  w.samples.insert(w.samples.end(), voice.tail_frames * dsp::kDecimation * dsp::kHopSize, 0.0f);
  return w;
}

std::vector<std::string> toy_transcripts(const ToyCorpusSpec& spec) {
  if (spec.alphabet.empty() || spec.max_word == 0 || spec.min_words == 0 || spec.max_words < spec.min_words) {
    throw std::invalid_argument("toy_transcripts: bad corpus spec");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> words(spec.min_words, spec.max_words), letters(1, spec.max_word),
      pick(0, spec.alphabet.size() - 1);
  std::vector<std::string> out;
  for (std::size_t c = 0; c < spec.clips; ++c) {
    std::string s;
    const std::size_t nw = words(rng);
    for (std::size_t w = 0; w < nw; ++w) {
      if (w) s.push_back(' ');
      const std::size_t nl = letters(rng);
      for (std::size_t l = 0; l < nl; ++l) s.push_back(spec.alphabet[pick(rng)]);
    }
    out.push_back(text::normalize_text(s));
  }
  return out;
}

std::filesystem::path write_toy_corpus(const std::filesystem::path& dir, const ToyCorpusSpec& spec) {
  const auto wavs = dir / "wavs";
  std::filesystem::create_directories(wavs);
  const auto meta = dir / "metadata.csv";
  std::ofstream out(meta);
  if (!out) throw DataError("cannot write " + meta.string());
  const auto texts = toy_transcripts(spec);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "TOY-%04zu", i + 1);
    dsp::write_wav(wavs / (std::string(id) + ".wav"), toy_waveform(texts[i], spec.voice));
    out << id << '|' << texts[i] << '|' << texts[i] << '\n';
  }
  return meta;
}

}  // namespace dctts::io
