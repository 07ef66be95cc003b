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

#include "dctts/loss/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace dctts::loss {
namespace {

double mask_count(const Tensor& mask) {
  double n = 0.0;
  for (float v : mask.values()) n += v;
  if (n <= 0.0) throw std::invalid_argument("loss mask selects no elements");
  return n;
}

void require_same(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + ad::to_string(a.shape()) + " vs " +
                                ad::to_string(b.shape()));
  }
}

}  // namespace

bool LossReport::finite() const {
  return std::isfinite(l1) && std::isfinite(bin_div) && std::isfinite(attention) && std::isfinite(total);
}

Tensor guided_weights(std::size_t n_chars, std::size_t n_frames, double g) {
  return guided_weights({n_chars}, {n_frames}, n_chars, n_frames, g);
}

Tensor guided_weights(const std::vector<std::size_t>& text_lengths, const std::vector<std::size_t>& frame_lengths,
                      std::size_t max_chars, std::size_t max_frames, double g) {
  if (text_lengths.size() != frame_lengths.size()) {
    throw std::invalid_argument("guided_weights: text and frame length lists differ in size");
  }
  Tensor w({text_lengths.size(), max_chars, max_frames});
  for (std::size_t b = 0; b < text_lengths.size(); ++b) {
    const std::size_t N = text_lengths[b], T = frame_lengths[b];
    if (N == 0 || T == 0 || N > max_chars || T > max_frames) {
      throw std::invalid_argument("guided_weights: invalid lengths for batch entry " + std::to_string(b));
    }
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) {
        const double diff = static_cast<double>(n) / N - static_cast<double>(t) / T;
        w(b, n, t) = static_cast<float>(1.0 - std::exp(-diff * diff / (2.0 * g * g)));
      }
  }
  return w;
}

Var bin_divergence(Var logits, const Tensor& target, const Tensor& mask) {
  return ad::binary_divergence_logits(logits, target, mask, static_cast<float>(mask_count(mask)));
}

Var l1_loss(Var probabilities, const Tensor& target, const Tensor& mask) {
  return ad::l1_distance(probabilities, target, mask, static_cast<float>(mask_count(mask)));
}

SpecLoss spec_loss(Var logits, Var probabilities, const Tensor& target, const Tensor& mask) {
  Var l1 = l1_loss(probabilities, target, mask);
  Var bin = bin_divergence(logits, target, mask);
  return {l1, bin, ad::add(l1, bin)};
}

Var guided_attention_loss(Var alignment, const Tensor& weights, double valid_cells) {
  return ad::weighted_sum(alignment, weights, static_cast<float>(valid_cells));
}

double bin_divergence(const Tensor& y, const Tensor& s) {
  require_same(y, s, "bin_divergence");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = y[i], t = s[i];
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bin_divergence: Y must lie in the open interval (0, 1)");
    acc += -t * std::log(p) - (1.0 - t) * std::log1p(-p);
  }
  return acc / static_cast<double>(y.size());
}

double spec_loss(const Tensor& y, const Tensor& s) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) l1 += std::abs(static_cast<double>(y[i]) - s[i]);
  return bin_divergence(y, s) + l1 / static_cast<double>(y.size());
}

double guided_attention_loss(const Tensor& alignment, const Tensor& weights) {
  require_same(alignment, weights, "guided_attention_loss");
  double acc = 0.0;
  for (std::size_t i = 0; i < alignment.size(); ++i) acc += static_cast<double>(alignment[i]) * weights[i];
  return acc / static_cast<double>(alignment.size());
}

}  // namespace dctts::loss
