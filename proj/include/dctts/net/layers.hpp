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
#include <string>
#include <vector>

#include "dctts/ops.hpp"
#include "dctts/parameter.hpp"
#include "dctts/tape.hpp"

namespace dctts::net {

using ad::Tape;
using ad::Tensor;
using Var = ad::Var<float>;

enum class Activation { none, relu, sigmoid };
enum class LayerKind { conv, highway, deconv };

// One layer of a stack. For highway layers `conv` is the 2C <- C gate
// convolution; the layer maps C channels to C channels.
struct LayerSpec {
  LayerKind kind = LayerKind::conv;
  ad::ConvSpec conv;
  Activation activation = Activation::none;

  std::size_t output_channels() const { return kind == LayerKind::highway ? conv.in_channels : conv.out_channels; }
  std::size_t output_time(std::size_t input_time) const {
    return kind == LayerKind::deconv ? 2 * input_time : input_time;
  }
};

LayerSpec conv_layer(std::size_t out, std::size_t in, std::size_t kernel, bool causal,
                     Activation act = Activation::none);
LayerSpec highway_layer(std::size_t channels, std::size_t kernel, std::size_t dilation, bool causal);
LayerSpec deconv_layer(std::size_t out, std::size_t in);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Parameters: "<prefix>.<index>.weight" (o, i, k) and "<prefix>.<index>.bias" (1, o, 1).
class Stack {
 public:
  Stack() = default;
  // Registers He-initialized weights and zero biases in `params`.
  Stack(std::string prefix, std::vector<LayerSpec> layers, ad::ParameterSet& params, std::uint64_t seed);

  // Runs all layers. With `final_activation` false the last layer's
  // activation is skipped (used to expose logits).
  Var forward(Tape<float>& tape, Var x, bool final_activation = true) const;

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const ad::Parameter<float>& weight(std::size_t i) const { return *weights_[i]; }
  const ad::Parameter<float>& bias(std::size_t i) const { return *biases_[i]; }
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
  std::vector<LayerSpec> layers_;
  std::vector<ad::Parameter<float>*> weights_;
  std::vector<ad::Parameter<float>*> biases_;
};

// Forward-only, one time step at a time, for stacks of causal layers. Each
// call consumes one input column and produces the matching output column,
// using cached per-layer input history.
class CausalStream {
 public:
  explicit CausalStream(const Stack& stack);

  std::vector<float> push(const std::vector<float>& column);
  std::size_t steps() const { return steps_; }

 private:
  const Stack* stack_;
  std::vector<std::vector<std::vector<float>>> history_;  // [layer][time][channel]
  std::size_t steps_ = 0;
};

}  // namespace dctts::net
