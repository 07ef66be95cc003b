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

namespace dctts::ad {

struct OpGradCheck {
  std::string op;
  int shapes = 0;
  double max_relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<OpGradCheck> ops;
  double tolerance = 0.0;

  bool passed() const;
};

// Compares every differentiable op's analytic gradient with central finite
// differences on `shapes_per_op` random shapes. The error of one check is
// ||analytic - numeric|| / max(||analytic||, ||numeric||) over each input.
// Default tolerances: 1e-2 for float, 1e-5 for double.
template <typename Real>
GradCheckReport run_gradient_suite(int shapes_per_op = 20, std::uint64_t seed = 7);

}  // namespace dctts::ad
