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

#include "dctts/tape.hpp"

namespace dctts::ad {

// C^{o<-i}_{k,dilation}; weight shape (o, i, k), bias shape (1, o, 1).
struct ConvSpec {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 1;
  std::size_t dilation = 1;
  bool causal = false;

  Shape weight_shape() const { return {out_channels, in_channels, kernel}; }
  Shape bias_shape() const { return {1, out_channels, 1}; }
  // Zero padding inserted before (left) and after (right) the sequence.
  std::size_t pad_left() const;
  std::size_t pad_right() const;
  void validate() const;
};

// Length-preserving stride-1 convolution. Causal mode pads (k-1)*dilation on
// the left; non-causal splits it evenly and requires it to be even.
template <typename Real>
Var<Real> conv1d(Var<Real> x, Var<Real> weight, Var<Real> bias, const ConvSpec& spec);

// Transposed convolution, kernel 2, stride 2: out[2t+j] = W_j x[t] + b.
// Weight shape (o, i, 2).
template <typename Real>
Var<Real> deconv1d(Var<Real> x, Var<Real> weight, Var<Real> bias);

// sigmoid(H1) * H2 + (1 - sigmoid(H1)) * x with [H1; H2] = gates.
template <typename Real>
Var<Real> highway(Var<Real> x, Var<Real> gates);

template <typename Real>
Var<Real> relu(Var<Real> x);
template <typename Real>
Var<Real> sigmoid(Var<Real> x);

template <typename Real>
Var<Real> concat_channels(Var<Real> a, Var<Real> b);
// Channels [begin, begin + count).
template <typename Real>
Var<Real> slice_channels(Var<Real> x, std::size_t begin, std::size_t count);

// Per-batch matrices (channels x time): a @ b and a^T @ b.
template <typename Real>
Var<Real> matmul(Var<Real> a, Var<Real> b);
template <typename Real>
Var<Real> matmul_tn(Var<Real> a, Var<Real> b);

// Softmax over the channel axis for every (batch, time) column.
template <typename Real>
Var<Real> softmax_over_rows(Var<Real> x);

// Row-major (batch, length) indices -> (batch, e, length). Table shape (1, e, vocab).
template <typename Real>
Var<Real> embed(std::span<const std::int32_t> indices, std::size_t batch, Var<Real> table);

template <typename Real>
Var<Real> scale(Var<Real> x, Real factor);
template <typename Real>
Var<Real> add(Var<Real> a, Var<Real> b);
template <typename Real>
Var<Real> mul(Var<Real> a, Var<Real> b);
// Sum of all elements into a (1, 1, 1) scalar.
template <typename Real>
Var<Real> sum(Var<Real> x);

// Masked reductions. `weights` has x's shape; result = sum(x * weights) / denominator.
// A zero weight removes an element from the reduction and from the gradient.
template <typename Real>
Var<Real> weighted_sum(Var<Real> x, const BasicTensor<Real>& weights, Real denominator);

// sum(weights * (-S * logits + softplus(logits))) / denominator.
template <typename Real>
Var<Real> binary_divergence_logits(Var<Real> logits, const BasicTensor<Real>& target,
                                   const BasicTensor<Real>& weights, Real denominator);

// sum(weights * |y - target|) / denominator.
template <typename Real>
Var<Real> l1_distance(Var<Real> y, const BasicTensor<Real>& target,
                      const BasicTensor<Real>& weights, Real denominator);

}  // namespace dctts::ad
