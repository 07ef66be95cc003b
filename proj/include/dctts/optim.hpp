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

#include "dctts/parameter.hpp"

namespace dctts::ad {

struct AdamConfig {
  double alpha = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-6;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

// Bias-corrected ADAM update of every parameter; increments step_count.
template <typename Real>
void adam_step(BasicParameterSet<Real>& params, const AdamConfig& config);

template <typename Real>
void adam_step(Parameter<Real>& param, const AdamConfig& config);

// He Gaussian initializer: N(0, 2 / fan_in), deterministic in `seed`.
template <typename Real>
BasicTensor<Real> he_init(Shape shape, std::size_t fan_in, std::uint64_t seed);

}  // namespace dctts::ad
