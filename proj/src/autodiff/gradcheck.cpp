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

#include "dctts/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <type_traits>

#include "dctts/ops.hpp"

namespace dctts::ad {
namespace {

template <typename Real>
using Builder = std::function<Var<Real>(std::vector<Var<Real>>&)>;

template <typename Real>
struct Case {
  std::vector<BasicTensor<Real>> inputs;
  Builder<Real> build;
};

template <typename Real>
class Checker {
 public:
  explicit Checker(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  BasicTensor<Real> random(Shape s, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    BasicTensor<Real> t(s);
    for (auto& v : t.values()) v = static_cast<Real>(dist(rng_));
    return t;
  }

  // Values with magnitude in [0.1, 1], random sign; keeps clear of kinks at 0.
  BasicTensor<Real> away_from_zero(Shape s) {
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::bernoulli_distribution sign(0.5);
    BasicTensor<Real> t(s);
    for (auto& v : t.values()) v = static_cast<Real>(sign(rng_) ? mag(rng_) : -mag(rng_));
    return t;
  }

  double check(const Case<Real>& c) {
    // Fixed random projection turns any output into a scalar loss.
    Tape<Real> probe;
    std::vector<Var<Real>> probe_vars;
    for (const auto& t : c.inputs) probe_vars.push_back(probe.constant(t));
    const Shape out_shape = c.build(probe_vars).shape();
    const BasicTensor<Real> projection = random(out_shape);

    auto evaluate = [&](const std::vector<BasicTensor<Real>>& inputs, Tape<Real>& tape,
                        std::vector<Var<Real>>& vars) {
      vars.clear();
      for (const auto& t : inputs) vars.push_back(tape.input(t));
      Var<Real> out = c.build(vars);
      return sum(mul(out, tape.constant(projection)));
    };

    Tape<Real> tape;
    std::vector<Var<Real>> vars;
    Var<Real> loss = evaluate(c.inputs, tape, vars);
    tape.backward(loss);

    const Real eps = std::is_same_v<Real, float> ? Real(1e-3) : Real(1e-4);
    double worst = 0.0;
    auto inputs = c.inputs;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto& analytic = tape.grad(vars[i]);
      double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
      for (std::size_t j = 0; j < inputs[i].size(); ++j) {
        const Real saved = inputs[i][j];
        auto eval_at = [&](Real v) {
          inputs[i][j] = v;
          Tape<Real> t;
          std::vector<Var<Real>> vs;
          return static_cast<double>(evaluate(inputs, t, vs).value()[0]);
        };
        const double numeric = (eval_at(saved + eps) - eval_at(saved - eps)) / (2.0 * static_cast<double>(eps));
        inputs[i][j] = saved;
        const double a = analytic.empty() ? 0.0 : static_cast<double>(analytic[j]);
        diff2 += (a - numeric) * (a - numeric);
        a2 += a * a;
        n2 += numeric * numeric;
      }
      const double scale = std::max({std::sqrt(a2), std::sqrt(n2), 1e-6});
      worst = std::max(worst, std::sqrt(diff2) / scale);
    }
    return worst;
  }

 private:
  std::mt19937_64 rng_;
};

template <typename Real>
OpGradCheck run_op(const std::string& name, int shapes, Checker<Real>& ck,
                   const std::function<Case<Real>(Checker<Real>&)>& make) {
  OpGradCheck r{name, shapes, 0.0};
  for (int s = 0; s < shapes; ++s) r.max_relative_error = std::max(r.max_relative_error, ck.check(make(ck)));
  return r;
}

}  // namespace

bool GradCheckReport::passed() const {
  return std::all_of(ops.begin(), ops.end(), [&](const OpGradCheck& o) { return o.max_relative_error < tolerance; });
}

template <typename Real>
GradCheckReport run_gradient_suite(int shapes_per_op, std::uint64_t seed) {
  using T = BasicTensor<Real>;
  using V = Var<Real>;
  Checker<Real> ck(seed);
  GradCheckReport report;
  report.tolerance = std::is_same_v<Real, float> ? 1e-2 : 1e-5;
  auto add_op = [&](const std::string& name, std::function<Case<Real>(Checker<Real>&)> make) {
    report.ops.push_back(run_op<Real>(name, shapes_per_op, ck, make));
  };

  auto small = [](Checker<Real>& c) {
    return Shape{c.uniform_int(1, 2), c.uniform_int(1, 3), c.uniform_int(1, 6)};
  };

  add_op("conv1d", [](Checker<Real>& c) {
    ConvSpec spec;
    spec.in_channels = c.uniform_int(1, 3);
    spec.out_channels = c.uniform_int(1, 3);
    spec.kernel = c.uniform_int(1, 3);
    spec.dilation = c.uniform_int(1, 3);
    spec.causal = c.uniform_int(0, 1) == 1;
    if (!spec.causal && ((spec.kernel - 1) * spec.dilation) % 2 != 0) spec.kernel = 3;
    const Shape xs{c.uniform_int(1, 2), spec.in_channels, c.uniform_int(1, 7)};
    return Case<Real>{{c.random(xs), c.random(spec.weight_shape()), c.random(spec.bias_shape())},
                      [spec](std::vector<V>& v) { return conv1d(v[0], v[1], v[2], spec); }};
  });
  add_op("deconv1d", [](Checker<Real>& c) {
    const std::size_t i = c.uniform_int(1, 3), o = c.uniform_int(1, 3);
    const Shape xs{c.uniform_int(1, 2), i, c.uniform_int(1, 5)};
    return Case<Real>{{c.random(xs), c.random({o, i, 2}), c.random({1, o, 1})},
                      [](std::vector<V>& v) { return deconv1d(v[0], v[1], v[2]); }};
  });
  add_op("highway", [](Checker<Real>& c) {
    const Shape xs{c.uniform_int(1, 2), c.uniform_int(1, 3), c.uniform_int(1, 6)};
    return Case<Real>{{c.random(xs), c.random({xs.batch, 2 * xs.channels, xs.time}, -2.0, 2.0)},
                      [](std::vector<V>& v) { return highway(v[0], v[1]); }};
  });
  add_op("relu", [small](Checker<Real>& c) {
    return Case<Real>{{c.away_from_zero(small(c))}, [](std::vector<V>& v) { return relu(v[0]); }};
  });
  add_op("sigmoid", [small](Checker<Real>& c) {
    return Case<Real>{{c.random(small(c), -3.0, 3.0)}, [](std::vector<V>& v) { return sigmoid(v[0]); }};
  });
  add_op("concat_channels", [](Checker<Real>& c) {
    const std::size_t b = c.uniform_int(1, 2), t = c.uniform_int(1, 5);
    return Case<Real>{{c.random({b, c.uniform_int(1, 3), t}), c.random({b, c.uniform_int(1, 3), t})},
                      [](std::vector<V>& v) { return concat_channels(v[0], v[1]); }};
  });
  add_op("slice_channels", [](Checker<Real>& c) {
    const Shape xs{c.uniform_int(1, 2), c.uniform_int(2, 5), c.uniform_int(1, 5)};
    const std::size_t begin = c.uniform_int(0, xs.channels - 1);
    const std::size_t count = c.uniform_int(1, xs.channels - begin);
    return Case<Real>{{c.random(xs)},
                      [begin, count](std::vector<V>& v) { return slice_channels(v[0], begin, count); }};
  });
  add_op("matmul", [](Checker<Real>& c) {
    const std::size_t b = c.uniform_int(1, 2), m = c.uniform_int(1, 4), k = c.uniform_int(1, 4),
                      n = c.uniform_int(1, 4);
    return Case<Real>{{c.random({b, m, k}), c.random({b, k, n})},
                      [](std::vector<V>& v) { return matmul(v[0], v[1]); }};
  });
  add_op("matmul_tn", [](Checker<Real>& c) {
    const std::size_t b = c.uniform_int(1, 2), m = c.uniform_int(1, 4), k = c.uniform_int(1, 4),
                      n = c.uniform_int(1, 4);
    return Case<Real>{{c.random({b, k, m}), c.random({b, k, n})},
                      [](std::vector<V>& v) { return matmul_tn(v[0], v[1]); }};
  });
  add_op("softmax_over_rows", [small](Checker<Real>& c) {
    return Case<Real>{{c.random(small(c), -2.0, 2.0)}, [](std::vector<V>& v) { return softmax_over_rows(v[0]); }};
  });
  add_op("embed", [](Checker<Real>& c) {
    const std::size_t batch = c.uniform_int(1, 2), len = c.uniform_int(1, 5), e = c.uniform_int(1, 3),
                      vocab = c.uniform_int(2, 6);
    std::vector<std::int32_t> ids(batch * len);
    for (auto& id : ids) id = static_cast<std::int32_t>(c.uniform_int(0, vocab - 1));
    return Case<Real>{{c.random({1, e, vocab})},
                      [ids, batch](std::vector<V>& v) { return embed<Real>(ids, batch, v[0]); }};
  });
  add_op("scale", [small](Checker<Real>& c) {
    const Real factor = static_cast<Real>(c.random({1, 1, 1}, -2.0, 2.0)[0]);
    return Case<Real>{{c.random(small(c))}, [factor](std::vector<V>& v) { return scale(v[0], factor); }};
  });
  add_op("add", [small](Checker<Real>& c) {
    const Shape s = small(c);
    return Case<Real>{{c.random(s), c.random(s)}, [](std::vector<V>& v) { return add(v[0], v[1]); }};
  });
  add_op("mul", [small](Checker<Real>& c) {
    const Shape s = small(c);
    return Case<Real>{{c.random(s), c.random(s)}, [](std::vector<V>& v) { return mul(v[0], v[1]); }};
  });
  add_op("sum", [small](Checker<Real>& c) {
    return Case<Real>{{c.random(small(c))}, [](std::vector<V>& v) { return sum(v[0]); }};
  });
  add_op("weighted_sum", [small](Checker<Real>& c) {
    const Shape s = small(c);
    const T w = c.random(s, 0.0, 1.0);
    const auto den = static_cast<Real>(s.size());
    return Case<Real>{{c.random(s)}, [w, den](std::vector<V>& v) { return weighted_sum(v[0], w, den); }};
  });
  add_op("binary_divergence_logits", [small](Checker<Real>& c) {
    const Shape s = small(c);
    const T target = c.random(s, 0.0, 1.0);
    const T mask = c.random(s, 0.0, 1.0);
    const auto den = static_cast<Real>(s.size());
    return Case<Real>{{c.random(s, -3.0, 3.0)}, [target, mask, den](std::vector<V>& v) {
                        return binary_divergence_logits(v[0], target, mask, den);
                      }};
  });
  add_op("l1_distance", [small](Checker<Real>& c) {
    const Shape s = small(c);
    const T y = c.random(s, 0.0, 1.0);
    T target = y;
    const T offset = c.away_from_zero(s);
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = y[i] + offset[i] * Real(0.5);
    const T mask = c.random(s, 0.0, 1.0);
    const auto den = static_cast<Real>(s.size());
    return Case<Real>{{y}, [target, mask, den](std::vector<V>& v) { return l1_distance(v[0], target, mask, den); }};
  });
  return report;
}

template GradCheckReport run_gradient_suite<float>(int, std::uint64_t);
template GradCheckReport run_gradient_suite<double>(int, std::uint64_t);

}  // namespace dctts::ad
