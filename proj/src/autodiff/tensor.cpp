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

#include "dctts/tensor.hpp"

#include <cmath>

#include "dctts/parameter.hpp"

namespace dctts::ad {

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.batch) + ", " + std::to_string(s.channels) + ", " +
         std::to_string(s.time) + ")";
}

template <typename Real>
bool BasicTensor<Real>::all_finite() const {
  for (Real v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template <typename Real>
Parameter<Real>& BasicParameterSet<Real>::add(std::string name, BasicTensor<Real> value) {
  if (find(name) != nullptr) throw std::invalid_argument("duplicate parameter name: " + name);
  params_.push_back(std::make_unique<Parameter<Real>>(std::move(name), std::move(value)));
  return *params_.back();
}

template <typename Real>
Parameter<Real>* BasicParameterSet<Real>::find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

template <typename Real>
const Parameter<Real>* BasicParameterSet<Real>::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

template <typename Real>
Parameter<Real>& BasicParameterSet<Real>::at(const std::string& name) {
  auto* p = find(name);
  if (p == nullptr) throw std::out_of_range("no parameter named " + name);
  return *p;
}

template <typename Real>
std::size_t BasicParameterSet<Real>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

template <typename Real>
void BasicParameterSet<Real>::zero_grad() {
  for (auto& p : params_) p->zero_grad();
}

template class BasicTensor<float>;
template class BasicTensor<double>;
template class BasicParameterSet<float>;
template class BasicParameterSet<double>;

}  // namespace dctts::ad
