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

#include "dctts/ops.hpp"
#include "dctts/tensor.hpp"

namespace dctts::loss {

using ad::Tensor;
using Var = ad::Var<float>;

inline constexpr double kGuidedWidth = 0.2;  // g

struct LossReport {
  double l1 = 0.0;
  double bin_div = 0.0;
  double attention = 0.0;
  double total = 0.0;

  bool finite() const;
};

// W[n, t] = 1 - exp(-(n/N - t/T)^2 / (2 g^2)) as a (1, N, T) tensor.
Tensor guided_weights(std::size_t n_chars, std::size_t n_frames, double g = kGuidedWidth);

// Batched weights of shape (batch, N_max, T_max); example b uses its own
// (N_b, T_b) and is zero outside its valid region.
Tensor guided_weights(const std::vector<std::size_t>& text_lengths, const std::vector<std::size_t>& frame_lengths,
                      std::size_t max_chars, std::size_t max_frames, double g = kGuidedWidth);

// Masked mean of -S * logit + log(1 + exp(logit)). `mask` is 1 for scored
// cells and 0 for padding; the mean runs over scored cells.
Var bin_divergence(Var logits, const Tensor& target, const Tensor& mask);
// Masked mean |sigmoid(logit) - S|.
Var l1_loss(Var probabilities, const Tensor& target, const Tensor& mask);

struct SpecLoss {
  Var l1;
  Var bin_div;
  Var total;
};
SpecLoss spec_loss(Var logits, Var probabilities, const Tensor& target, const Tensor& mask);

// sum(A * W) / count, where count is the number of valid (n, t) cells.
Var guided_attention_loss(Var alignment, const Tensor& weights, double valid_cells);

// Reference evaluations on plain tensors (no tape), arithmetic means over all cells.
// Throws std::invalid_argument when Y leaves the open interval (0, 1).
double bin_divergence(const Tensor& y, const Tensor& s);
double spec_loss(const Tensor& y, const Tensor& s);
double guided_attention_loss(const Tensor& alignment, const Tensor& weights);

}  // namespace dctts::loss
