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

#include "dctts/net/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "dctts/optim.hpp"

namespace dctts::net {

LayerSpec conv_layer(std::size_t out, std::size_t in, std::size_t kernel, bool causal, Activation act) {
  LayerSpec l;
  l.kind = LayerKind::conv;
  l.conv = ad::ConvSpec{in, out, kernel, 1, causal};
  l.activation = act;
  return l;
}

LayerSpec highway_layer(std::size_t channels, std::size_t kernel, std::size_t dilation, bool causal) {
  LayerSpec l;
  l.kind = LayerKind::highway;
  l.conv = ad::ConvSpec{channels, 2 * channels, kernel, dilation, causal};
  return l;
}

LayerSpec deconv_layer(std::size_t out, std::size_t in) {
  LayerSpec l;
  l.kind = LayerKind::deconv;
  l.conv = ad::ConvSpec{in, out, 2, 1, false};
  return l;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Stack::Stack(std::string prefix, std::vector<LayerSpec> layers, ad::ParameterSet& params, std::uint64_t seed)
    : prefix_(std::move(prefix)), layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& c = layers_[i].conv;
    const bool deconv = layers_[i].kind == LayerKind::deconv;
    if (!deconv) c.validate();
    const std::string base = prefix_ + "." + std::to_string(i);
    const ad::Shape wshape = c.weight_shape();
    // Each deconvolution output sample sums over one input column.
    const std::size_t fan_in = deconv ? c.in_channels : c.in_channels * c.kernel;
    weights_.push_back(&params.add(base + ".weight", ad::he_init<float>(wshape, fan_in, mix_seed(seed, params.size()))));
    biases_.push_back(&params.add(base + ".bias", Tensor(c.bias_shape())));
  }
}

Var Stack::forward(Tape<float>& tape, Var x, bool final_activation) const {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    Var w = tape.parameter(*weights_[i]);
    Var b = tape.parameter(*biases_[i]);
    switch (l.kind) {
      case LayerKind::conv: x = ad::conv1d(x, w, b, l.conv); break;
      case LayerKind::highway: x = ad::highway(x, ad::conv1d(x, w, b, l.conv)); break;
      case LayerKind::deconv: x = ad::deconv1d(x, w, b); break;
    }
    const bool last = i + 1 == layers_.size();
    if (last && !final_activation) break;
    if (l.activation == Activation::relu) x = ad::relu(x);
    if (l.activation == Activation::sigmoid) x = ad::sigmoid(x);
  }
  return x;
}

CausalStream::CausalStream(const Stack& stack) : stack_(&stack), history_(stack.layers().size()) {
  for (const auto& l : stack.layers()) {
    if (l.kind == LayerKind::deconv || !l.conv.causal) {
      throw std::invalid_argument("CausalStream needs a stack of causal convolution/highway layers");
    }
  }
}

std::vector<float> CausalStream::push(const std::vector<float>& column) {
  std::vector<float> x = column;
  const auto& layers = stack_->layers();
  const auto t = static_cast<std::ptrdiff_t>(steps_);
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& l = layers[li];
    const auto& c = l.conv;
    if (x.size() != c.in_channels) throw std::invalid_argument("CausalStream: channel mismatch");
    auto& hist = history_[li];
    hist.push_back(x);
    const auto& w = stack_->weight(li).value;
    const auto& b = stack_->bias(li).value;
    std::vector<float> out(c.out_channels);
    for (std::size_t o = 0; o < c.out_channels; ++o) {
      float acc = b[o];
      for (std::size_t j = 0; j < c.kernel; ++j) {
        const std::ptrdiff_t src = t - static_cast<std::ptrdiff_t>((c.kernel - 1 - j) * c.dilation);
        if (src < 0) continue;
        const auto& in = hist[static_cast<std::size_t>(src)];
        for (std::size_t i = 0; i < c.in_channels; ++i) acc += w(o, i, j) * in[i];
      }
      out[o] = acc;
    }
    if (l.kind == LayerKind::highway) {
      const std::size_t C = c.in_channels;
      std::vector<float> y(C);
      for (std::size_t ch = 0; ch < C; ++ch) {
        const float s = 1.0f / (1.0f + std::exp(-out[ch]));
        y[ch] = s * out[ch + C] + (1.0f - s) * x[ch];
      }
      out = std::move(y);
    }
    if (l.activation == Activation::relu)
      for (auto& v : out) v = std::max(v, 0.0f);
    if (l.activation == Activation::sigmoid)
      for (auto& v : out) v = 1.0f / (1.0f + std::exp(-v));
    x = std::move(out);
  }
  ++steps_;
  return x;
}

}  // namespace dctts::net
