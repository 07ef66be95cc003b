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

#include "dctts/net/hparams.hpp"
#include "dctts/net/networks.hpp"
#include "dctts/ops.hpp"

using namespace dctts;
using namespace dctts::net;
using ad::Shape;

namespace {

Tensor random_tensor(Shape s, std::uint64_t seed, float lo = 0.0f, float hi = 1.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(lo, hi);
  Tensor t(s);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = d(rng);
  return t;
}

std::vector<std::int32_t> random_text(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int32_t> d(1, 31);
  std::vector<std::int32_t> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Finite logits map strictly inside (0, 1); in float the sigmoid may round to
// an endpoint, so the stored output is checked on the closed interval.
void expect_unit_interval(const Tensor& logits) {
  Tape<float> tape;
  const Tensor y = ad::sigmoid(tape.constant(logits)).value();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    ASSERT_TRUE(std::isfinite(logits[i]));
    const double p = 1.0 / (1.0 + std::exp(-static_cast<double>(logits[i])));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    EXPECT_GE(y[i], 0.0f);
    EXPECT_LE(y[i], 1.0f);
  }
}

HyperParams small() { return HyperParams::reduced(16, 24, 24); }

}  // namespace

TEST(TextEnc, FullSizeShapes) {
  Text2Mel model(HyperParams{}, 1);
  Tape<float> tape;
  const auto text = random_text(13, 2);
  const auto enc = model.text_enc(tape, text, 1);
  EXPECT_EQ(enc.keys.shape(), (Shape{1, 256, 13}));
  EXPECT_EQ(enc.values.shape(), (Shape{1, 256, 13}));
}

TEST(TextEnc, LengthPreservedAndEmptyRejected) {
  Text2Mel model(small(), 3);
  for (std::size_t n : {1u, 2u, 7u, 180u}) {
    Tape<float> tape;
    const auto text = random_text(n, n);
    EXPECT_EQ(model.text_enc(tape, text, 1).keys.shape(), (Shape{1, 24, n}));
  }
  Tape<float> tape;
  EXPECT_THROW(model.text_enc(tape, std::vector<std::int32_t>{}, 1), std::invalid_argument);
}

TEST(TextEnc, ReceptiveFieldMatchesLayerArithmetic) {
  // Oracle: non-causal width is 1 + sum (k - 1) * dilation over the stack.
  // The 1x1 convolutions and (HC 1,1) layers add nothing.
  std::size_t width = 1;
  for (int rep = 0; rep < 2; ++rep)
    for (std::size_t dil : {1u, 3u, 9u, 27u}) width += 2 * dil;
  width += 2 * 2;  // (HC 3,1) x 2
  ASSERT_EQ(width, 165u);
  const std::size_t half = (width - 1) / 2;

  Text2Mel model(small(), 4);
  const std::size_t n = 200, pos = 100;
  auto text = random_text(n, 5);
  Tape<float> t1;
  const Tensor k1 = model.text_enc(t1, text, 1).keys.value();
  text[pos] = text[pos] == 2 ? 3 : 2;
  Tape<float> t2;
  const Tensor k2 = model.text_enc(t2, text, 1).keys.value();
  for (std::size_t col = 0; col < n; ++col) {
    bool changed = false;
    for (std::size_t c = 0; c < 24; ++c) changed |= k1(0, c, col) != k2(0, c, col);
    const std::size_t dist = col > pos ? col - pos : pos - col;
    EXPECT_EQ(changed, dist <= half) << "column " << col;
  }
}

TEST(AudioEnc, FullSizeShapeAndZeroInput) {
  Text2Mel model(HyperParams{}, 6);
  Tape<float> tape;
  const auto q = model.audio_enc(tape, tape.constant(Tensor({1, 80, 64}, 0.0f)));
  ASSERT_EQ(q.shape(), (Shape{1, 256, 64}));
  for (std::size_t c = 0; c < 256; ++c)
    for (std::size_t t = 1; t < 64; ++t) EXPECT_EQ(q.value()(0, c, t), q.value()(0, c, 0));
}

TEST(AudioEnc, Causality) {
  Text2Mel model(small(), 7);
  const std::size_t T = 40;
  for (std::size_t t0 : {0u, 13u, 39u}) {
    Tensor s = random_tensor({1, 80, T}, 8);
    Tape<float> a;
    const Tensor qa = model.audio_enc(a, a.constant(s)).value();
    for (std::size_t f = 0; f < 80; ++f) s(0, f, t0) = 1.0f - s(0, f, t0);
    Tape<float> b;
    const Tensor qb = model.audio_enc(b, b.constant(s)).value();
    bool future_changed = false;
    for (std::size_t c = 0; c < 24; ++c) {
      for (std::size_t t = 0; t < t0; ++t) EXPECT_EQ(qa(0, c, t), qb(0, c, t));
      future_changed |= qa(0, c, t0) != qb(0, c, t0);
    }
    EXPECT_TRUE(future_changed);
  }
}

TEST(Attend, ScalarExample) {
  Tape<float> tape;
  const auto k = tape.constant(Tensor({1, 1, 2}, std::vector<float>{2.0f, 0.0f}));
  const auto v = tape.constant(Tensor({1, 1, 2}, std::vector<float>{3.0f, 5.0f}));
  const auto q = tape.constant(Tensor({1, 1, 1}, std::vector<float>{1.0f}));
  const auto out = attend(k, v, q);
  EXPECT_NEAR(out.alignment.value()[0], 0.8808f, 1e-4);
  EXPECT_NEAR(out.alignment.value()[1], 0.1192f, 1e-4);
  EXPECT_NEAR(out.context.value()[0], 3.2384f, 1e-4);
}

TEST(Attend, IdenticalKeysGiveUniformWeights) {
  Tape<float> tape;
  Tensor k({1, 4, 5});
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t n = 0; n < 5; ++n) k(0, c, n) = 0.3f * float(c) - 0.2f;
  const auto out = attend(tape.constant(k), tape.constant(random_tensor({1, 4, 5}, 9)),
                          tape.constant(random_tensor({1, 4, 7}, 10, -1.0f, 1.0f)));
  for (std::size_t i = 0; i < out.alignment.value().size(); ++i) EXPECT_NEAR(out.alignment.value()[i], 0.2f, 1e-6);
  EXPECT_THROW(attend(tape.constant(k), tape.constant(Tensor({1, 3, 5})), tape.constant(Tensor({1, 4, 7}))),
               std::invalid_argument);
}

TEST(AudioDec, FullSizeShapeAndRange) {
  Text2Mel model(HyperParams{}, 11);
  Tape<float> tape;
  const auto logits = model.audio_dec_logits(tape, tape.constant(random_tensor({1, 512, 64}, 12, -2.0f, 2.0f)));
  ASSERT_EQ(logits.shape(), (Shape{1, 80, 64}));
  expect_unit_interval(logits.value());
}

TEST(Text2MelNet, ShapesDeterminismAndColumnStochasticAttention) {
  Text2Mel model(small(), 13);
  const auto text = random_text(9, 14);
  const Tensor s = random_tensor({1, 80, 21}, 15);
  Tape<float> a, b;
  const auto oa = model.forward(a, text, 1, a.constant(s));
  const auto ob = model.forward(b, text, 1, b.constant(s));
  EXPECT_EQ(oa.mel.shape(), (Shape{1, 80, 21}));
  EXPECT_EQ(oa.alignment.shape(), (Shape{1, 9, 21}));
  EXPECT_EQ(oa.mel.value(), ob.mel.value());
  EXPECT_EQ(oa.alignment.value(), ob.alignment.value());
  for (std::size_t t = 0; t < 21; ++t) {
    double col = 0.0;
    for (std::size_t n = 0; n < 9; ++n) {
      const float v = oa.alignment.value()(0, n, t);
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
      col += v;
    }
    EXPECT_NEAR(col, 1.0, 1e-5);
  }
}

TEST(Text2MelNet, EndToEndCausalityWithFixedText) {
  Text2Mel model(small(), 16);
  const auto text = random_text(6, 17);
  Tensor s = random_tensor({1, 80, 30}, 18);
  Tape<float> a;
  const Tensor ya = model.forward(a, text, 1, a.constant(s)).mel.value();
  const std::size_t t0 = 17;
  for (std::size_t t = t0; t < 30; ++t)
    for (std::size_t f = 0; f < 80; ++f) s(0, f, t) = 0.5f;
  Tape<float> b;
  const Tensor yb = model.forward(b, text, 1, b.constant(s)).mel.value();
  for (std::size_t f = 0; f < 80; ++f)
    for (std::size_t t = 0; t < t0; ++t) EXPECT_EQ(ya(0, f, t), yb(0, f, t));
}

TEST(Text2MelNet, BatchRowsAreIndependent) {
  Text2Mel model(small(), 19);
  const auto t1 = random_text(5, 20), t2 = random_text(5, 21);
  const Tensor s1 = random_tensor({1, 80, 12}, 22), s2 = random_tensor({1, 80, 12}, 23);
  std::vector<std::int32_t> both(t1);
  both.insert(both.end(), t2.begin(), t2.end());
  Tensor sb({2, 80, 12});
  for (std::size_t f = 0; f < 80; ++f)
    for (std::size_t t = 0; t < 12; ++t) {
      sb(0, f, t) = s1(0, f, t);
      sb(1, f, t) = s2(0, f, t);
    }
  Tape<float> tb, ta, tc;
  const Tensor yb = model.forward(tb, both, 2, tb.constant(sb)).mel.value();
  const Tensor y1 = model.forward(ta, t1, 1, ta.constant(s1)).mel.value();
  const Tensor y2 = model.forward(tc, t2, 1, tc.constant(s2)).mel.value();
  for (std::size_t f = 0; f < 80; ++f)
    for (std::size_t t = 0; t < 12; ++t) {
      EXPECT_NEAR(yb(0, f, t), y1(0, f, t), 1e-5);
      EXPECT_NEAR(yb(1, f, t), y2(0, f, t), 1e-5);
    }
}

TEST(Text2MelNet, ArbitraryShapes) {
  Text2Mel model(HyperParams::reduced(8, 8, 8), 24);
  std::mt19937 rng(25);
  std::uniform_int_distribution<std::size_t> nd(1, 180), td(1, 256);
  for (int i = 0; i < 6; ++i) {
    const std::size_t n = i == 0 ? 1 : i == 1 ? 180 : nd(rng);
    const std::size_t t = i == 0 ? 1 : i == 1 ? 256 : td(rng);
    Tape<float> tape;
    const auto out = model.forward(tape, random_text(n, i), 1, tape.constant(random_tensor({1, 80, t}, i)));
    EXPECT_EQ(out.mel.shape(), (Shape{1, 80, t}));
    EXPECT_EQ(out.alignment.shape(), (Shape{1, n, t}));
  }
}

TEST(SsrnNet, FullSizeShapeAndRange) {
  Ssrn model(HyperParams{}, 26);
  Tape<float> tape;
  const auto logits = model.forward_logits(tape, tape.constant(random_tensor({1, 80, 64}, 27)));
  ASSERT_EQ(logits.shape(), (Shape{1, 513, 256}));
  expect_unit_interval(logits.value());
}

TEST(SsrnNet, UpsamplesByFour) {
  Ssrn model(small(), 28);
  for (std::size_t t : {1u, 3u, 10u}) {
    Tape<float> tape;
    EXPECT_EQ(model.forward(tape, tape.constant(random_tensor({1, 80, t}, t))).shape(), (Shape{1, 513, 4 * t}));
  }
  Tape<float> tape;
  EXPECT_THROW(model.forward(tape, tape.constant(Tensor({1, 79, 4}))), std::invalid_argument);
}

TEST(CausalStreamEngine, MatchesBatchForward) {
  Text2Mel model(small(), 29);
  const Tensor s = random_tensor({1, 80, 25}, 30);
  Tape<float> tape;
  const Tensor q = model.audio_enc(tape, tape.constant(s)).value();
  CausalStream stream(model.audio_encoder());
  for (std::size_t t = 0; t < 25; ++t) {
    std::vector<float> col(80);
    for (std::size_t f = 0; f < 80; ++f) col[f] = s(0, f, t);
    const auto out = stream.push(col);
    ASSERT_EQ(out.size(), 24u);
    for (std::size_t c = 0; c < 24; ++c) EXPECT_NEAR(out[c], q(0, c, t), 1e-4f);
  }
  EXPECT_EQ(stream.steps(), 25u);
}
