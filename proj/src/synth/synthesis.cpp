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

#include "dctts/synth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dctts/dsp/phase.hpp"
#include "dctts/error.hpp"
#include "dctts/ops.hpp"

namespace dctts::synth {
namespace {

using Column = std::vector<float>;

std::size_t argmax(std::span<const float> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void require_finite(const Column& v, const char* what, std::size_t t) {
  for (float x : v)
    if (!std::isfinite(x)) throw NumericError(std::string("synthesis: non-finite ") + what + " at frame " + std::to_string(t));
}

// Attention for one query column against fixed keys and values.
class Attention {
 public:
  Attention(const ad::Tensor& keys, const ad::Tensor& values)
      : k_(keys), v_(values), d_(keys.channels()), n_(keys.time()) {}

  std::size_t chars() const { return n_; }

  Column weights(const Column& q) const {
    Column s(n_);
    const float scale = 1.0f / std::sqrt(static_cast<float>(d_));
    for (std::size_t n = 0; n < n_; ++n) {
      float acc = 0.0f;
      for (std::size_t c = 0; c < d_; ++c) acc += k_(0, c, n) * q[c];
      s[n] = acc * scale;
    }
    const float mx = *std::max_element(s.begin(), s.end());
    float z = 0.0f;
    for (auto& x : s) z += (x = std::exp(x - mx));
    for (auto& x : s) x /= z;
    return s;
  }

  // concat(V a, q)
  Column decoder_input(const Column& a, const Column& q) const {
    Column r(2 * d_);
    for (std::size_t c = 0; c < d_; ++c) {
      float acc = 0.0f;
      for (std::size_t n = 0; n < n_; ++n) acc += v_(0, c, n) * a[n];
      r[c] = acc;
      r[d_ + c] = q[c];
    }
    return r;
  }

 private:
  const ad::Tensor& k_;
  const ad::Tensor& v_;
  std::size_t d_, n_;
};

bool should_stop(const std::vector<Column>& frames, std::size_t position, std::size_t last_char,
                 const SynthesisConfig& cfg) {
  if (position < last_char || cfg.stop_lookback == 0 || frames.size() < cfg.stop_lookback) return false;
  for (std::size_t i = frames.size() - cfg.stop_lookback; i < frames.size(); ++i) {
    double mean = 0.0;
    for (float v : frames[i]) mean += v;
    if (mean / static_cast<double>(frames[i].size()) >= cfg.stop_energy_threshold) return false;
  }
  return true;
}

}  // namespace

ConstrainedColumn incremental_constraint(std::span<const float> column, std::size_t n_prev) {
  if (column.empty()) throw std::invalid_argument("incremental_constraint: empty column");
  ConstrainedColumn out;
  out.column.assign(column.begin(), column.end());
  const std::size_t n = argmax(column);
  const auto diff = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(n_prev);
  if (diff >= -1 && diff <= 3) {
    out.position = n;
    return out;
  }
  out.position = std::min(n_prev + 1, column.size() - 1);
  std::fill(out.column.begin(), out.column.end(), 0.0f);
  out.column[out.position] = 1.0f;
  out.forced = true;
  return out;
}

MelSynthesis synthesize_mel(const net::Text2Mel& model, const text::EncodedText& encoded,
                            const SynthesisConfig& cfg) {
  const std::size_t n_chars = text::unpadded_length(encoded);
  if (n_chars == 0) throw std::invalid_argument("synthesize_mel: empty text");
  if (cfg.max_frames == 0) throw std::invalid_argument("synthesize_mel: max_frames must be at least 1");
  const std::vector<std::int32_t> chars(encoded.begin(), encoded.begin() + static_cast<std::ptrdiff_t>(n_chars));

  ad::Tape<float> tape;
  const auto kv = model.text_enc(tape, chars, 1);
  const Attention att(kv.keys.value(), kv.values.value());
  const std::size_t F = model.hparams().mel_bands;

  std::vector<Column> frames, columns, inputs{Column(F, 0.0f)};
  std::vector<std::size_t> positions;
  net::CausalStream enc(model.audio_encoder()), dec(model.audio_decoder());
  std::size_t n_prev = 0;
  bool stopped = false;
  for (std::size_t t = 0; t < cfg.max_frames; ++t) {
    Column q, y;
    if (cfg.cached) {
      q = enc.push(inputs[t]);
    } else {
      // Re-encode the whole prefix from scratch.
      net::CausalStream fresh(model.audio_encoder());
      for (std::size_t j = 0; j <= t; ++j) q = fresh.push(inputs[j]);
    }
    require_finite(q, "audio encoding", t);
    Column a = att.weights(q);
    std::size_t pos = argmax(a);
    if (cfg.incremental_attention) {
      auto c = incremental_constraint(a, n_prev);
      a = std::move(c.column);
      pos = c.position;
    }
    columns.push_back(a);
    if (cfg.cached) {
      y = dec.push(att.decoder_input(a, q));
    } else {
      net::CausalStream fresh_enc(model.audio_encoder()), fresh_dec(model.audio_decoder());
      for (std::size_t j = 0; j <= t; ++j) y = fresh_dec.push(att.decoder_input(columns[j], fresh_enc.push(inputs[j])));
    }
    require_finite(y, "mel frame", t);
    frames.push_back(y);
    inputs.push_back(y);
    positions.push_back(pos);
    n_prev = pos;
    if (should_stop(frames, pos, n_chars - 1, cfg)) {
      stopped = t + 1 < cfg.max_frames;
      break;
    }
  }

  MelSynthesis out;
  out.chars = n_chars;
  out.positions = std::move(positions);
  out.stopped = stopped;
  const std::size_t T = frames.size();
  out.mel = dsp::Spectrogram(F, T);
  out.alignment.assign(n_chars * T, 0.0f);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t f = 0; f < F; ++f) out.mel(f, t) = frames[t][f];
    for (std::size_t n = 0; n < n_chars; ++n) out.alignment[n * T + t] = columns[t][n];
  }
  return out;
}

dsp::Spectrogram predict_linear(const dsp::Spectrogram& mel, const net::Ssrn& ssrn) {
  if (mel.bins != ssrn.hparams().mel_bands || mel.frames == 0) {
    throw std::invalid_argument("predict_linear: expected an (80 x frames) mel spectrogram");
  }
  ad::Tape<float> tape;
  const auto z = ssrn.forward(tape, tape.constant(ad::Tensor({1, mel.bins, mel.frames}, mel.values))).value();
  dsp::Spectrogram out(z.channels(), z.time());
  std::copy(z.data(), z.data() + z.size(), out.values.begin());
  for (float v : out.values)
    if (!std::isfinite(v)) throw NumericError("SSRN produced non-finite magnitudes");
  return out;
}

dsp::Waveform synthesize_waveform(const dsp::Spectrogram& mel, const net::Ssrn& ssrn, const VocoderConfig& cfg) {
  const auto mags = dsp::denormalize_magnitude(predict_linear(mel, ssrn), cfg.gamma, cfg.eta);
  dsp::Waveform w;
  w.samples = dsp::rtisi_la(mags, cfg.lookahead, cfg.iterations);
  float peak = 0.0f;
  for (float v : w.samples) peak = std::max(peak, std::abs(v));
  const float level = std::min(mags.max(), 1.0f);
  if (peak > 0.0f) {
    const float gain = cfg.peak * level / peak;
    for (float& v : w.samples) v *= gain;
  }
  return w;
}

}  // namespace dctts::synth
