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
#include <span>
#include <vector>

#include "dctts/net/hparams.hpp"
#include "dctts/net/layers.hpp"

namespace dctts::net {

struct TextEncoding {
  Var keys;    // K: (batch, d, N)
  Var values;  // V: (batch, d, N)
};

struct AttentionOutput {
  Var context;    // R = V A: (batch, d, T)
  Var alignment;  // A: (batch, N, T), column-stochastic over characters
};

struct Text2MelOutput {
  Var logits;     // pre-sigmoid decoder output, (batch, F, T)
  Var mel;        // sigmoid(logits); column t predicts input frame t + 1
  Var alignment;  // (batch, N, T)
};

// A = softmax over characters of K^T Q / sqrt(d); R = V A.
AttentionOutput attend(Var keys, Var values, Var queries);

// Text -> coarse mel network.
class Text2Mel {
 public:
  Text2Mel(const HyperParams& hp, std::uint64_t seed);
  Text2Mel(const Text2Mel&) = delete;
  Text2Mel& operator=(const Text2Mel&) = delete;

  // `text` is row-major (batch, N) vocabulary indices.
  TextEncoding text_enc(Tape<float>& tape, std::span<const std::int32_t> text, std::size_t batch) const;
  Var audio_enc(Tape<float>& tape, Var mel) const;
  Var audio_dec_logits(Tape<float>& tape, Var context_and_queries) const;

  // Teacher-forced pass; `mel_input` is (batch, F, T) with a leading zero frame.
  Text2MelOutput forward(Tape<float>& tape, std::span<const std::int32_t> text, std::size_t batch,
                         Var mel_input) const;

  const HyperParams& hparams() const { return hp_; }
  ad::ParameterSet& params() { return params_; }
  const ad::ParameterSet& params() const { return params_; }
  const ad::Parameter<float>& embedding() const { return *embedding_; }
  const Stack& text_encoder() const { return text_enc_; }
  const Stack& audio_encoder() const { return audio_enc_; }
  const Stack& audio_decoder() const { return audio_dec_; }

 private:
  HyperParams hp_;
  ad::ParameterSet params_;
  ad::Parameter<float>* embedding_ = nullptr;
  Stack text_enc_;
  Stack audio_enc_;
  Stack audio_dec_;
};

// Coarse mel (F, T) -> linear spectrogram (F', 4T).
class Ssrn {
 public:
  Ssrn(const HyperParams& hp, std::uint64_t seed);
  Ssrn(const Ssrn&) = delete;
  Ssrn& operator=(const Ssrn&) = delete;

  Var forward_logits(Tape<float>& tape, Var mel) const;
  Var forward(Tape<float>& tape, Var mel) const;

  const HyperParams& hparams() const { return hp_; }
  ad::ParameterSet& params() { return params_; }
  const ad::ParameterSet& params() const { return params_; }
  const Stack& stack() const { return stack_; }

 private:
  HyperParams hp_;
  ad::ParameterSet params_;
  Stack stack_;
};

std::vector<LayerSpec> text_encoder_layers(const HyperParams& hp);
std::vector<LayerSpec> audio_encoder_layers(const HyperParams& hp);
std::vector<LayerSpec> audio_decoder_layers(const HyperParams& hp);
std::vector<LayerSpec> ssrn_layers(const HyperParams& hp);

}  // namespace dctts::net
