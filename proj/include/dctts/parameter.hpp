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
#include <memory>
#include <string>
#include <vector>

#include "dctts/tensor.hpp"

namespace dctts::ad {

// A trainable tensor with its gradient and ADAM moment state.
template <typename Real>
struct Parameter {
  std::string name;
  BasicTensor<Real> value;
  BasicTensor<Real> grad;
  BasicTensor<Real> adam_m;
  BasicTensor<Real> adam_v;
  std::uint64_t step_count = 0;

  Parameter(std::string n, BasicTensor<Real> v)
      : name(std::move(n)),
        value(std::move(v)),
        grad(value.shape()),
        adam_m(value.shape()),
        adam_v(value.shape()) {}

  void zero_grad() { grad.fill(Real(0)); }
};

// Ordered, name-addressable collection. Parameter addresses stay stable.
template <typename Real>
class BasicParameterSet {
 public:
  Parameter<Real>& add(std::string name, BasicTensor<Real> value);

  Parameter<Real>* find(const std::string& name);
  const Parameter<Real>* find(const std::string& name) const;
  Parameter<Real>& at(const std::string& name);

  std::size_t size() const { return params_.size(); }
  Parameter<Real>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<Real>& operator[](std::size_t i) const { return *params_[i]; }

  // Total scalar count across all parameter values.
  std::size_t scalar_count() const;
  void zero_grad();

 private:
  std::vector<std::unique_ptr<Parameter<Real>>> params_;
};

using ParameterSet = BasicParameterSet<float>;

}  // namespace dctts::ad
