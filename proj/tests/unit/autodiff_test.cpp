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

#include "dctts/gradcheck.hpp"
#include "dctts/ops.hpp"
#include "dctts/optim.hpp"

namespace ad = dctts::ad;
using ad::Shape;
using ad::Tensor;

namespace {

Tensor series(std::vector<float> v) {
  const std::size_t n = v.size();
  return Tensor({1, 1, n}, std::move(v));
}

std::vector<float> as_vector(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

Tensor random_tensor(Shape s, std::mt19937& rng) {
  std::normal_distribution<float> dist(0.0f, 1.0f);
  Tensor t(s);
  for (auto& v : t.values()) v = dist(rng);
  return t;
}

}  // namespace

TEST(Conv1d, IdentityKernelReturnsInput) {
  std::mt19937 rng(1);
  ad::Tape<float> tape;
  ad::ConvSpec spec{3, 3, 1, 1, false};
  Tensor w(spec.weight_shape());
  for (std::size_t c = 0; c < 3; ++c) w(c, c, 0) = 1.0f;
  const Tensor x = random_tensor({2, 3, 5}, rng);
  auto y = ad::conv1d(tape.constant(x), tape.constant(w), tape.constant(Tensor(spec.bias_shape())), spec);
  EXPECT_EQ(y.value(), x);
}

TEST(Conv1d, CausalHandConvolution) {
  ad::Tape<float> tape;
  auto x = tape.constant(series({1, 2, 3, 4}));
  auto w = tape.constant(Tensor({1, 1, 3}, 1.0f));
  auto b = tape.constant(Tensor({1, 1, 1}));
  EXPECT_EQ(as_vector(ad::conv1d(x, w, b, {1, 1, 3, 1, true}).value()), (std::vector<float>{1, 3, 6, 9}));
  EXPECT_EQ(as_vector(ad::conv1d(x, w, b, {1, 1, 3, 2, true}).value()), (std::vector<float>{1, 2, 4, 6}));
}

TEST(Conv1d, NonCausalIsCentered) {
  ad::Tape<float> tape;
  auto x = tape.constant(series({1, 2, 3, 4}));
  auto w = tape.constant(Tensor({1, 1, 3}, 1.0f));
  auto b = tape.constant(Tensor({1, 1, 1}));
  // Taps at t-1, t, t+1.
  EXPECT_EQ(as_vector(ad::conv1d(x, w, b, {1, 1, 3, 1, false}).value()), (std::vector<float>{3, 6, 9, 7}));
}

TEST(Conv1d, RejectsChannelMismatchAndOddPadding) {
  ad::Tape<float> tape;
  auto x = tape.constant(Tensor({1, 2, 4}));
  ad::ConvSpec spec{3, 1, 1, 1, false};
  auto w = tape.constant(Tensor(spec.weight_shape()));
  auto b = tape.constant(Tensor(spec.bias_shape()));
  EXPECT_THROW(ad::conv1d(x, w, b, spec), std::invalid_argument);

  ad::ConvSpec odd{2, 1, 2, 1, false};
  auto w2 = tape.constant(Tensor(odd.weight_shape()));
  EXPECT_THROW(ad::conv1d(x, w2, b, odd), std::invalid_argument);
}

TEST(Conv1d, CausalOutputIgnoresFutureInput) {
  std::mt19937 rng(3);
  for (std::size_t dilation : {1, 2, 3, 9}) {
    ad::ConvSpec spec{2, 3, 3, dilation, true};
    const Tensor w = random_tensor(spec.weight_shape(), rng);
    const Tensor b = random_tensor(spec.bias_shape(), rng);
    Tensor x = random_tensor({1, 2, 12}, rng);
    ad::Tape<float> tape;
    const Tensor before = ad::conv1d(tape.constant(x), tape.constant(w), tape.constant(b), spec).value();
    const std::size_t t0 = 7;
    x(0, 1, t0) += 5.0f;
    const Tensor after = ad::conv1d(tape.constant(x), tape.constant(w), tape.constant(b), spec).value();
    for (std::size_t o = 0; o < 3; ++o) {
      for (std::size_t t = 0; t < t0; ++t) EXPECT_EQ(before(0, o, t), after(0, o, t));
      EXPECT_NE(before(0, o, t0), after(0, o, t0));
    }
  }
}

TEST(Deconv1d, DoublesTimeAndInterleaves) {
  ad::Tape<float> tape;
  auto w = tape.constant(Tensor({1, 1, 2}, 1.0f));
  auto b = tape.constant(Tensor({1, 1, 1}));
  EXPECT_EQ(as_vector(ad::deconv1d(tape.constant(series({1, 2})), w, b).value()), (std::vector<float>{1, 1, 2, 2}));

  auto w4 = tape.constant(Tensor({4, 4, 2}, 0.1f));
  auto b4 = tape.constant(Tensor({1, 4, 1}, 0.5f));
  auto y = ad::deconv1d(tape.constant(Tensor({2, 4, 64})), w4, b4);
  EXPECT_EQ(y.shape(), (Shape{2, 4, 128}));
  for (float v : y.value().values()) EXPECT_FLOAT_EQ(v, 0.5f);
  EXPECT_EQ(ad::deconv1d(y, w4, b4).shape().time, 256u);
  EXPECT_THROW(ad::deconv1d(tape.constant(Tensor({1, 3, 4})), w4, b4), std::invalid_argument);
}

TEST(Highway, GateLimits) {
  ad::Tape<float> tape;
  const Tensor x = series({0.3f, -1.2f});
  auto gates = [&](float h1, float h2) { return tape.constant(Tensor({1, 2, 2}, {h1, h1, h2, h2})); };
  auto closed = ad::highway(tape.constant(x), gates(-1e4f, 7.0f)).value();
  EXPECT_EQ(as_vector(closed), as_vector(x));
  auto open = ad::highway(tape.constant(x), gates(1e4f, 7.0f)).value();
  EXPECT_EQ(as_vector(open), (std::vector<float>{7.0f, 7.0f}));
  auto half = ad::highway(tape.constant(x), gates(0.0f, 2.0f)).value();
  EXPECT_FLOAT_EQ(half[0], 0.5f * 2.0f + 0.5f * 0.3f);
  EXPECT_FLOAT_EQ(half[1], 0.5f * 2.0f + 0.5f * -1.2f);
  EXPECT_THROW(ad::highway(tape.constant(x), tape.constant(Tensor({1, 3, 2}))), std::invalid_argument);
}

TEST(Highway, ZeroGateConvolutionAveragesCandidateAndInput) {
  std::mt19937 rng(5);
  ad::Tape<float> tape;
  const std::size_t C = 3;
  ad::ConvSpec spec{C, 2 * C, 3, 1, true};
  Tensor w = random_tensor(spec.weight_shape(), rng);
  for (std::size_t o = 0; o < C; ++o)
    for (std::size_t i = 0; i < C; ++i)
      for (std::size_t k = 0; k < 3; ++k) w(o, i, k) = 0.0f;
  const Tensor x = random_tensor({1, C, 6}, rng);
  auto xv = tape.constant(x);
  auto h = ad::conv1d(xv, tape.constant(w), tape.constant(Tensor(spec.bias_shape())), spec);
  auto y = ad::highway(xv, h).value();
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t t = 0; t < 6; ++t) EXPECT_NEAR(y(0, c, t), 0.5f * (h.value()(0, c + C, t) + x(0, c, t)), 1e-6f);
}

TEST(Elementwise, SoftmaxReluConcat) {
  ad::Tape<float> tape;
  auto s = ad::softmax_over_rows(tape.constant(Tensor({1, 2, 1}, {2.0f, 0.0f}))).value();
  EXPECT_NEAR(s[0], std::exp(2.0) / (std::exp(2.0) + 1.0), 1e-6);
  EXPECT_NEAR(s[0], 0.8808f, 1e-4f);
  EXPECT_NEAR(s[1], 0.1192f, 1e-4f);

  EXPECT_EQ(as_vector(ad::relu(tape.constant(series({-1, 0, 2}))).value()), (std::vector<float>{0, 0, 2}));
  auto cat = ad::concat_channels(tape.constant(Tensor({1, 2, 3})), tape.constant(Tensor({1, 2, 3})));
  EXPECT_EQ(cat.shape(), (Shape{1, 4, 3}));
}

TEST(Elementwise, SoftmaxColumnsAreDistributions) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 9);
    Tensor x = random_tensor({dim(rng), dim(rng), dim(rng)}, rng);
    for (auto& v : x.values()) v *= 10.0f;
    ad::Tape<float> tape;
    const auto y = ad::softmax_over_rows(tape.constant(x)).value();
    for (std::size_t b = 0; b < y.batch(); ++b)
      for (std::size_t t = 0; t < y.time(); ++t) {
        double total = 0.0;
        for (std::size_t c = 0; c < y.channels(); ++c) {
          EXPECT_GE(y(b, c, t), 0.0f);
          EXPECT_LE(y(b, c, t), 1.0f);
          total += y(b, c, t);
        }
        EXPECT_NEAR(total, 1.0, 1e-5);
      }
  }
}

TEST(Embed, LooksUpColumnsAndRejectsOutOfRange) {
  ad::Tape<float> tape;
  Tensor table({1, 2, 4}, {0, 1, 2, 3, 10, 11, 12, 13});
  auto tv = tape.constant(table);
  const std::vector<std::int32_t> ids{3, 0, 2};
  auto y = ad::embed<float>(ids, 1, tv).value();
  EXPECT_EQ(as_vector(y), (std::vector<float>{3, 0, 2, 13, 10, 12}));
  const std::vector<std::int32_t> bad{4};
  EXPECT_THROW(ad::embed<float>(bad, 1, tv), std::out_of_range);
}

TEST(Backward, LinearFormGradientIsTheOtherFactor) {
  std::mt19937 rng(11);
  ad::Parameter<float> w("w", random_tensor({1, 3, 4}, rng));
  const Tensor x = random_tensor({1, 3, 4}, rng);
  ad::Tape<float> tape;
  auto loss = ad::sum(ad::mul(tape.parameter(w), tape.constant(x)));
  tape.backward(loss);
  EXPECT_EQ(w.grad, x);
}

TEST(Backward, SigmoidSlopeAtZero) {
  ad::Tape<float> tape;
  auto x = tape.input(Tensor({1, 1, 1}));
  tape.backward(ad::sum(ad::sigmoid(x)));
  EXPECT_FLOAT_EQ(tape.grad(x)[0], 0.25f);
}

TEST(Backward, ConstantsReceiveNoGradient) {
  ad::Parameter<float> w("w", Tensor({1, 1, 2}, 1.0f));
  ad::Tape<float> tape;
  auto c = tape.constant(Tensor({1, 1, 2}, 3.0f));
  tape.backward(ad::sum(ad::mul(tape.parameter(w), c)));
  EXPECT_TRUE(tape.grad(c).empty());
  EXPECT_EQ(as_vector(w.grad), (std::vector<float>{3.0f, 3.0f}));
}

TEST(Backward, RejectsNonScalarAndSecondSweep) {
  ad::Tape<float> tape;
  auto x = tape.input(Tensor({1, 1, 2}, 1.0f));
  EXPECT_THROW(tape.backward(x), std::invalid_argument);
  auto loss = ad::sum(x);
  tape.backward(loss);
  EXPECT_TRUE(tape.consumed());
  EXPECT_THROW(tape.backward(loss), std::logic_error);
}

TEST(Backward, SharedParameterAccumulates) {
  ad::Parameter<float> w("w", Tensor({1, 1, 1}, 2.0f));
  ad::Tape<float> tape;
  auto a = tape.parameter(w);
  auto b = tape.parameter(w);
  tape.backward(ad::sum(ad::mul(a, b)));  // w^2
  EXPECT_FLOAT_EQ(w.grad[0], 4.0f);
}

TEST(HeInit, StandardDeviationAndDeterminism) {
  const Tensor a = ad::he_init<float>({1, 1, 100000}, 2, 42);
  double mean = 0.0, var = 0.0;
  for (float v : a.values()) mean += v;
  mean /= a.size();
  for (float v : a.values()) var += (v - mean) * (v - mean);
  var /= a.size();
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.05);  // 2 / fan_in

  const Tensor b = ad::he_init<float>({1, 1, 100000}, 8, 42);
  double var_b = 0.0;
  for (float v : b.values()) var_b += double(v) * v;
  EXPECT_NEAR(var_b / b.size(), 0.25, 0.25 * 0.05);

  EXPECT_EQ(ad::he_init<float>({2, 3, 4}, 12, 7), ad::he_init<float>({2, 3, 4}, 12, 7));
  EXPECT_NE(ad::he_init<float>({2, 3, 4}, 12, 7), ad::he_init<float>({2, 3, 4}, 12, 8));
  EXPECT_THROW(ad::he_init<float>({1, 1, 1}, 0, 1), std::invalid_argument);
}

TEST(Adam, FirstStepIsSignTimesAlpha) {
  ad::AdamConfig cfg;
  ad::Parameter<double> p("p", ad::BasicTensor<double>({1, 1, 3}, {0.0, 0.0, 0.0}));
  p.grad = ad::BasicTensor<double>({1, 1, 3}, {0.5, -3.0, 1.0});
  ad::adam_step(p, cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    const double g = p.grad[i];
    EXPECT_NEAR(p.value[i], -cfg.alpha * g / (std::abs(g) + cfg.epsilon), 1e-15);
  }
  EXPECT_NEAR(p.value[2], -2e-4, 1e-9);
  EXPECT_EQ(p.step_count, 1u);
}

TEST(Adam, ZeroGradientLeavesValueButCountsStep) {
  ad::ParameterSet set;
  auto& p = set.add("p", Tensor({1, 2, 2}, 0.7f));
  ad::adam_step(set, ad::AdamConfig{});
  EXPECT_EQ(as_vector(p.value), (std::vector<float>(4, 0.7f)));
  EXPECT_EQ(p.step_count, 1u);
}

TEST(Adam, RejectsShapeDrift) {
  ad::Parameter<float> p("p", Tensor({1, 1, 2}));
  p.grad = Tensor({1, 1, 3});
  EXPECT_THROW(ad::adam_step(p, ad::AdamConfig{}), std::logic_error);
}

TEST(GradientSuite, FloatWithinOnePercent) {
  const auto report = ad::run_gradient_suite<float>(20, 1);
  for (const auto& op : report.ops) {
    EXPECT_LT(op.max_relative_error, 1e-2) << op.op;
    EXPECT_GE(op.shapes, 20);
  }
  EXPECT_TRUE(report.passed());
}

TEST(GradientSuite, DoubleWithinOneInHundredThousand) {
  const auto report = ad::run_gradient_suite<double>(20, 2);
  for (const auto& op : report.ops) EXPECT_LT(op.max_relative_error, 1e-5) << op.op;
  EXPECT_TRUE(report.passed());
}
