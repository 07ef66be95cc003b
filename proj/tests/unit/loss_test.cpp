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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dctts/loss/losses.hpp"
#include "dctts/ops.hpp"

using namespace dctts;
using namespace dctts::loss;
using ad::Shape;
using ad::Tape;

namespace {

double w_oracle(double n, double N, double t, double T) {
  const double d = n / N - t / T;
  return 1.0 - std::exp(-d * d / (2.0 * 0.2 * 0.2));
}

Tensor uniform(Shape s, std::mt19937_64& rng, float lo, float hi) {
  std::uniform_real_distribution<float> d(lo, hi);
  Tensor t(s);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = d(rng);
  return t;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

TEST(BinDivergence, HalfEverywhereIsLn2) {
  const Tensor half({1, 3, 4}, 0.5f);
  EXPECT_NEAR(bin_divergence(half, half), std::log(2.0), 1e-7);
  Tape<float> tape;
  const auto v = bin_divergence(tape.constant(Tensor({1, 3, 4}, 0.0f)), half, Tensor({1, 3, 4}, 1.0f));
  EXPECT_NEAR(v.value()[0], 0.69315f, 1e-5);
}

TEST(BinDivergence, GradientIsResidualOverCount) {
  std::mt19937_64 rng(1);
  const Tensor logits = uniform({2, 5, 3}, rng, -3.0f, 3.0f);
  const Tensor s = uniform({2, 5, 3}, rng, 0.0f, 1.0f);
  Tape<float> tape;
  const auto x = tape.input(logits);
  tape.backward(bin_divergence(x, s, Tensor({2, 5, 3}, 1.0f)));
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double y = 1.0 / (1.0 + std::exp(-double(logits[i])));
    EXPECT_NEAR(tape.grad(x)[i], (y - s[i]) / 30.0, 1e-6);
  }
}

TEST(BinDivergence, VanishesAtZeroTargetAndZeroPrediction) {
  const Tensor s({1, 2, 2}, 0.0f);
  Tape<float> tape;
  const auto v = bin_divergence(tape.constant(Tensor({1, 2, 2}, -30.0f)), s, Tensor({1, 2, 2}, 1.0f));
  EXPECT_LT(v.value()[0], 1e-12f);
  EXPECT_NEAR(bin_divergence(Tensor({1, 2, 2}, 1e-7f), s), 0.0, 1e-6);
  EXPECT_THROW(bin_divergence(Tensor({1, 2, 2}, 1.0f), s), std::invalid_argument);
  EXPECT_THROW(bin_divergence(Tensor({1, 2, 2}, 0.0f), s), std::invalid_argument);
  EXPECT_THROW(bin_divergence(Tensor({1, 2, 3}, 0.5f), s), std::invalid_argument);
}

TEST(SpecLoss, L1TermExample) {
  const Tensor y({1, 1, 1}, 0.6f), s({1, 1, 1}, 0.5f);
  EXPECT_NEAR(spec_loss(y, s) - bin_divergence(y, s), 0.1, 1e-6);
}

TEST(SpecLoss, MinimisedOnlyAtTarget) {
  std::mt19937_64 rng(2);
  for (int probe = 0; probe < 10000; ++probe) {
    const Tensor s = uniform({1, 3, 2}, rng, 0.01f, 0.99f);
    const Tensor y = uniform({1, 3, 2}, rng, 0.01f, 0.99f);
    const double floor = bin_divergence(s, s);
    ASSERT_GT(spec_loss(y, s) - floor, 0.0) << "probe " << probe;
    ASSERT_NEAR(spec_loss(s, s) - floor, 0.0, 1e-12);
  }
}

TEST(SpecLoss, TapeMatchesReference) {
  std::mt19937_64 rng(3);
  const Tensor s = uniform({2, 4, 5}, rng, 0.0f, 1.0f);
  const Tensor y = uniform({2, 4, 5}, rng, 0.02f, 0.98f);
  Tensor lg(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) lg[i] = static_cast<float>(logit(y[i]));
  Tape<float> tape;
  const auto x = tape.constant(lg);
  const auto out = spec_loss(x, ad::sigmoid(x), s, Tensor(s.shape(), 1.0f));
  EXPECT_NEAR(out.total.value()[0], spec_loss(y, s), 1e-5);
  EXPECT_NEAR(out.bin_div.value()[0], bin_divergence(y, s), 1e-5);
  EXPECT_NEAR(out.total.value()[0], out.l1.value()[0] + out.bin_div.value()[0], 1e-6);
}

TEST(SpecLoss, MaskedCellsAreIgnored) {
  std::mt19937_64 rng(4);
  const Tensor s = uniform({1, 3, 6}, rng, 0.0f, 1.0f);
  Tensor lg = uniform({1, 3, 6}, rng, -2.0f, 2.0f);
  Tensor mask({1, 3, 6}, 1.0f);
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t t = 4; t < 6; ++t) mask(0, f, t) = 0.0f;
  Tape<float> a;
  const auto xa = a.input(lg);
  const double first = spec_loss(xa, ad::sigmoid(xa), s, mask).total.value()[0];
  a.backward(spec_loss(xa, ad::sigmoid(xa), s, mask).total);
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t t = 4; t < 6; ++t) {
      EXPECT_EQ(a.grad(xa)(0, f, t), 0.0f);
      lg(0, f, t) = 50.0f;
    }
  Tape<float> b;
  const auto xb = b.constant(lg);
  EXPECT_NEAR(spec_loss(xb, ad::sigmoid(xb), s, mask).total.value()[0], first, 1e-6);
}

TEST(GuidedWeights, MatchOracleAndProperties) {
  const std::size_t N = 12, T = 30;
  const Tensor w = guided_weights(N, T);
  ASSERT_EQ(w.shape(), (Shape{1, N, T}));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t) {
      const double ref = w_oracle(n, N, t, T);
      EXPECT_NEAR(w(0, n, t), ref, 1e-6);
      EXPECT_GE(w(0, n, t), 0.0f);
      EXPECT_LT(w(0, n, t), 1.0f);
      const bool diagonal = n * T == t * N;
      EXPECT_EQ(w(0, n, t) == 0.0f, diagonal) << n << "," << t;
    }
  // Monotone in the distance from the diagonal.
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const std::size_t n = 0;
    EXPECT_LE(w(0, n, t), w(0, n, t + 1));
  }
  const Tensor sq = guided_weights(20, 20);
  for (std::size_t n = 0; n < 20; ++n)
    for (std::size_t t = 0; t < 20; ++t) EXPECT_EQ(sq(0, n, t), sq(0, t, n));
}

TEST(GuidedWeights, BatchedRegionsAreZeroOutside) {
  const Tensor w = guided_weights({3, 5}, {7, 4}, 5, 7);
  ASSERT_EQ(w.shape(), (Shape{2, 5, 7}));
  const Tensor a = guided_weights(3, 7), b = guided_weights(5, 4);
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t t = 0; t < 7; ++t) {
      EXPECT_EQ(w(0, n, t), n < 3 ? a(0, n, t) : 0.0f);
      EXPECT_EQ(w(1, n, t), t < 4 ? b(0, n, t) : 0.0f);
    }
}

TEST(GuidedAttention, Examples) {
  const std::size_t N = 10;
  Tensor diag({1, N, N}, 0.0f);
  for (std::size_t i = 0; i < N; ++i) diag(0, i, i) = 1.0f;
  EXPECT_NEAR(guided_attention_loss(diag, guided_weights(N, N)), 0.0, 1e-12);

  Tensor spot({1, N, N}, 0.0f);
  spot(0, 5, 7) = 1.0f;
  Tape<float> tape;
  const auto column = guided_attention_loss(tape.constant(spot), guided_weights(N, N), 1.0);
  EXPECT_NEAR(column.value()[0], 1.0 - std::exp(-0.5), 1e-6);
  EXPECT_NEAR(column.value()[0], 0.39347, 1e-5);

  const std::size_t M = 100;
  Tensor anti({1, M, M}, 0.0f);
  double brute = 0.0;
  for (std::size_t t = 0; t < M; ++t) {
    anti(0, M - 1 - t, t) = 1.0f;
    brute += w_oracle(double(M - 1 - t), M, t, M);
  }
  brute /= double(M * M);
  EXPECT_NEAR(guided_attention_loss(anti, guided_weights(M, M)), brute, 1e-6);
  EXPECT_THROW(guided_attention_loss(anti, guided_weights(M, M - 1)), std::invalid_argument);
}

TEST(GuidedAttention, LinearInAlignment) {
  std::mt19937_64 rng(5);
  const Tensor w = guided_weights(8, 11);
  const Tensor a = uniform({1, 8, 11}, rng, 0.0f, 1.0f), b = uniform({1, 8, 11}, rng, 0.0f, 1.0f);
  Tensor c(a.shape());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.25f * a[i] + 2.0f * b[i];
  EXPECT_NEAR(guided_attention_loss(c, w), 0.25 * guided_attention_loss(a, w) + 2.0 * guided_attention_loss(b, w),
              1e-6);
}
