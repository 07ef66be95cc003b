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

#include "dctts/net/networks.hpp"

#include <cmath>
#include <stdexcept>

#include "dctts/optim.hpp"

namespace dctts::net {
namespace {

// The (HC k=3, dilation 1 -> 3 -> 9 -> 27) block.
void append_dilated_block(std::vector<LayerSpec>& layers, std::size_t channels, bool causal) {
  for (std::size_t dilation : {1, 3, 9, 27}) layers.push_back(highway_layer(channels, 3, dilation, causal));
}

}  // namespace

std::vector<LayerSpec> text_encoder_layers(const HyperParams& hp) {
  const std::size_t d2 = 2 * hp.hidden;
  std::vector<LayerSpec> l;
  l.push_back(conv_layer(d2, hp.embed, 1, false, Activation::relu));
  l.push_back(conv_layer(d2, d2, 1, false));
  for (int r = 0; r < 2; ++r) append_dilated_block(l, d2, false);
  for (int r = 0; r < 2; ++r) l.push_back(highway_layer(d2, 3, 1, false));
  for (int r = 0; r < 2; ++r) l.push_back(highway_layer(d2, 1, 1, false));
  return l;
}

std::vector<LayerSpec> audio_encoder_layers(const HyperParams& hp) {
  const std::size_t d = hp.hidden;
  std::vector<LayerSpec> l;
  l.push_back(conv_layer(d, hp.mel_bands, 1, true, Activation::relu));
  l.push_back(conv_layer(d, d, 1, true, Activation::relu));
  l.push_back(conv_layer(d, d, 1, true));
  for (int r = 0; r < 2; ++r) append_dilated_block(l, d, true);
  for (int r = 0; r < 2; ++r) l.push_back(highway_layer(d, 3, 3, true));
  return l;
}

std::vector<LayerSpec> audio_decoder_layers(const HyperParams& hp) {
  const std::size_t d = hp.hidden;
  std::vector<LayerSpec> l;
  l.push_back(conv_layer(d, 2 * d, 1, true));
  append_dilated_block(l, d, true);
  for (int r = 0; r < 2; ++r) l.push_back(highway_layer(d, 3, 1, true));
  for (int r = 0; r < 3; ++r) l.push_back(conv_layer(d, d, 1, true, Activation::relu));
  l.push_back(conv_layer(hp.mel_bands, d, 1, true, Activation::sigmoid));
  return l;
}

std::vector<LayerSpec> ssrn_layers(const HyperParams& hp) {
  const std::size_t c = hp.ssrn;
  std::vector<LayerSpec> l;
  l.push_back(conv_layer(c, hp.mel_bands, 1, false));
  l.push_back(highway_layer(c, 3, 1, false));
  l.push_back(highway_layer(c, 3, 3, false));
  for (int r = 0; r < 2; ++r) {
    l.push_back(deconv_layer(c, c));
    l.push_back(highway_layer(c, 3, 1, false));
    l.push_back(highway_layer(c, 3, 3, false));
  }
  l.push_back(conv_layer(2 * c, c, 1, false));
  for (int r = 0; r < 2; ++r) l.push_back(highway_layer(2 * c, 3, 1, false));
  l.push_back(conv_layer(hp.linear_bins, 2 * c, 1, false));
  for (int r = 0; r < 2; ++r) l.push_back(conv_layer(hp.linear_bins, hp.linear_bins, 1, false, Activation::relu));
  l.push_back(conv_layer(hp.linear_bins, hp.linear_bins, 1, false, Activation::sigmoid));
  return l;
}

AttentionOutput attend(Var keys, Var values, Var queries) {
  const auto& ks = keys.shape();
  const auto& vs = values.shape();
  const auto& qs = queries.shape();
  if (ks != vs || ks.channels != qs.channels || ks.batch != qs.batch) {
    throw std::invalid_argument("attend: K " + ad::to_string(ks) + ", V " + ad::to_string(vs) + ", Q " +
                                ad::to_string(qs) + " are incompatible");
  }
  const float inv_sqrt_d = 1.0f / std::sqrt(static_cast<float>(ks.channels));
  Var scores = ad::scale(ad::matmul_tn(keys, queries), inv_sqrt_d);
  Var alignment = ad::softmax_over_rows(scores);
  return {ad::matmul(values, alignment), alignment};
}

Text2Mel::Text2Mel(const HyperParams& hp, std::uint64_t seed) : hp_(hp) {
  // Embedding lookup is a linear map from one-hot vectors, so fan-in = vocabulary size.
  embedding_ = &params_.add("text_enc.embed", ad::he_init<float>({1, hp.embed, hp.vocab}, hp.vocab, mix_seed(seed, 0)));
  text_enc_ = Stack("text_enc", text_encoder_layers(hp), params_, seed);
  audio_enc_ = Stack("audio_enc", audio_encoder_layers(hp), params_, seed);
  audio_dec_ = Stack("audio_dec", audio_decoder_layers(hp), params_, seed);
}

TextEncoding Text2Mel::text_enc(Tape<float>& tape, std::span<const std::int32_t> text, std::size_t batch) const {
  if (text.empty()) throw std::invalid_argument("text_enc: empty text");
  Var table = tape.parameter(*embedding_);
  Var h = text_enc_.forward(tape, ad::embed(text, batch, table));
  return {ad::slice_channels(h, 0, hp_.hidden), ad::slice_channels(h, hp_.hidden, hp_.hidden)};
}

Var Text2Mel::audio_enc(Tape<float>& tape, Var mel) const { return audio_enc_.forward(tape, mel); }

Var Text2Mel::audio_dec_logits(Tape<float>& tape, Var context_and_queries) const {
  return audio_dec_.forward(tape, context_and_queries, false);
}

Text2MelOutput Text2Mel::forward(Tape<float>& tape, std::span<const std::int32_t> text, std::size_t batch,
                                 Var mel_input) const {
  const TextEncoding kv = text_enc(tape, text, batch);
  Var queries = audio_enc(tape, mel_input);
  const AttentionOutput att = attend(kv.keys, kv.values, queries);
  Var logits = audio_dec_logits(tape, ad::concat_channels(att.context, queries));
  return {logits, ad::sigmoid(logits), att.alignment};
}

Ssrn::Ssrn(const HyperParams& hp, std::uint64_t seed) : hp_(hp) {
  stack_ = Stack("ssrn", ssrn_layers(hp), params_, seed);
}

Var Ssrn::forward_logits(Tape<float>& tape, Var mel) const { return stack_.forward(tape, mel, false); }

Var Ssrn::forward(Tape<float>& tape, Var mel) const { return stack_.forward(tape, mel, true); }

}  // namespace dctts::net
