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
#include <functional>
#include <deque>
#include <initializer_list>

#include "dctts/parameter.hpp"
#include "dctts/tensor.hpp"

namespace dctts::ad {

template <typename Real>
class Tape;

// Handle to a value recorded on a tape.
template <typename Real>
struct Var {
  Tape<Real>* tape = nullptr;
  std::uint32_t id = 0;

  const BasicTensor<Real>& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Records operations in execution order. Inputs of every node precede it, so a
// single reverse sweep visits each node once.
template <typename Real>
class Tape {
 public:
  using Tensor = BasicTensor<Real>;
  using BackwardFn = std::function<void(Tape&, std::uint32_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that never receives a gradient.
  Var<Real> constant(Tensor value);
  // Leaf whose gradient is kept and readable through grad() after backward.
  Var<Real> input(Tensor value);
  // Leaf bound to a parameter; backward accumulates into Parameter::grad.
  Var<Real> parameter(Parameter<Real>& p);

  // Records an op output. `backward` is dropped when no input needs a gradient.
  Var<Real> record(Tensor value, std::initializer_list<Var<Real>> inputs, BackwardFn backward);

  const Tensor& value(std::uint32_t id) const;
  const Tensor& value(Var<Real> v) const { return value(v.id); }
  bool requires_grad(std::uint32_t id) const { return nodes_[id].requires_grad; }
  bool requires_grad(Var<Real> v) const { return requires_grad(v.id); }

  // Gradient buffer of a node, zero-allocated on first access.
  Tensor& grad_buffer(std::uint32_t id);
  // Gradient of the output node currently being back-propagated.
  const Tensor& grad(std::uint32_t id) const { return nodes_[id].grad; }
  const Tensor& grad(Var<Real> v) const { return grad(v.id); }

  // Reverse sweep from a scalar loss. A tape can be swept once.
  void backward(Var<Real> loss);

  std::size_t node_count() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter<Real>* param = nullptr;
    bool requires_grad = false;
    bool keep_grad = false;
    BackwardFn backward;
  };

  Var<Real> push(Node node);

  std::deque<Node> nodes_;
  bool consumed_ = false;
};

template <typename Real>
const BasicTensor<Real>& Var<Real>::value() const {
  return tape->value(id);
}

}  // namespace dctts::ad
