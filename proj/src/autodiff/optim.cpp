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

#include "dctts/optim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dctts::ad {

template <typename Real>
void adam_step(Parameter<Real>& p, const AdamConfig& c) {
  if (p.grad.shape() != p.value.shape() || p.adam_m.shape() != p.value.shape() ||
      p.adam_v.shape() != p.value.shape()) {
    throw std::logic_error("shape drift between value and gradient/moments of " + p.name);
  }
  ++p.step_count;
  const double t = static_cast<double>(p.step_count);
  const double m_corr = 1.0 - std::pow(c.beta1, t);
  const double v_corr = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    const double g = p.grad[i];
    const double m = c.beta1 * p.adam_m[i] + (1.0 - c.beta1) * g;
    const double v = c.beta2 * p.adam_v[i] + (1.0 - c.beta2) * g * g;
    p.adam_m[i] = static_cast<Real>(m);
    p.adam_v[i] = static_cast<Real>(v);
    const double update = c.alpha * (m / m_corr) / (std::sqrt(v / v_corr) + c.epsilon);
    p.value[i] = static_cast<Real>(p.value[i] - update);
  }
}

template <typename Real>
void adam_step(BasicParameterSet<Real>& params, const AdamConfig& config) {
  for (std::size_t i = 0; i < params.size(); ++i) adam_step(params[i], config);
}

template <typename Real>
BasicTensor<Real> he_init(Shape shape, std::size_t fan_in, std::uint64_t seed) {
  if (fan_in == 0) throw std::invalid_argument("he_init: fan_in must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
  BasicTensor<Real> t(shape);
  for (auto& v : t.values()) v = static_cast<Real>(dist(rng));
  return t;
}

template void adam_step(Parameter<float>&, const AdamConfig&);
template void adam_step(Parameter<double>&, const AdamConfig&);
template void adam_step(BasicParameterSet<float>&, const AdamConfig&);
template void adam_step(BasicParameterSet<double>&, const AdamConfig&);
template BasicTensor<float> he_init(Shape, std::size_t, std::uint64_t);
template BasicTensor<double> he_init(Shape, std::size_t, std::uint64_t);

}  // namespace dctts::ad
