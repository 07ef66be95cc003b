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

#include "dctts/tape.hpp"

#include <stdexcept>

namespace dctts::ad {

template <typename Real>
Var<Real> Tape<Real>::push(Node node) {
  if (consumed_) throw std::logic_error("tape already consumed by backward()");
  nodes_.push_back(std::move(node));
  return Var<Real>{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename Real>
Var<Real> Tape<Real>::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

template <typename Real>
Var<Real> Tape<Real>::input(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  n.keep_grad = true;
  return push(std::move(n));
}

template <typename Real>
Var<Real> Tape<Real>::parameter(Parameter<Real>& p) {
  Node n;
  n.param = &p;
  n.requires_grad = true;
  return push(std::move(n));
}

template <typename Real>
Var<Real> Tape<Real>::record(Tensor value, std::initializer_list<Var<Real>> inputs,
                             BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (const auto& in : inputs) {
    if (in.tape != this) throw std::invalid_argument("operation mixes values from different tapes");
    if (nodes_[in.id].requires_grad) n.requires_grad = true;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

template <typename Real>
const BasicTensor<Real>& Tape<Real>::value(std::uint32_t id) const {
  const Node& n = nodes_.at(id);
  return n.param != nullptr ? n.param->value : n.value;
}

template <typename Real>
BasicTensor<Real>& Tape<Real>::grad_buffer(std::uint32_t id) {
  Node& n = nodes_.at(id);
  if (n.grad.empty()) n.grad = Tensor(value(id).shape());
  return n.grad;
}

template <typename Real>
void Tape<Real>::backward(Var<Real> loss) {
  if (consumed_) throw std::logic_error("tape already consumed by backward()");
  if (loss.tape != this) throw std::invalid_argument("loss belongs to a different tape");
  if (value(loss.id).size() != 1) {
    throw std::invalid_argument("backward() needs a scalar loss, got shape " +
                                to_string(value(loss.id).shape()));
  }
  consumed_ = true;
  grad_buffer(loss.id)[0] = Real(1);
  for (std::int64_t id = loss.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.empty() || !n.requires_grad) continue;
    if (n.backward) {
      n.backward(*this, static_cast<std::uint32_t>(id));
      if (!n.keep_grad) n.grad = Tensor();
    } else if (n.param != nullptr) {
      auto& dst = n.param->grad;
      if (dst.shape() != n.grad.shape()) {
        throw std::logic_error("gradient shape drift on parameter " + n.param->name);
      }
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
    }
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace dctts::ad
