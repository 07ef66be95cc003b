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

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dctts::ad {

// (batch, channels, time), time fastest-varying.
struct Shape {
  std::size_t batch = 0;
  std::size_t channels = 0;
  std::size_t time = 0;

  constexpr std::size_t size() const { return batch * channels * time; }
  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

template <typename Real>
class BasicTensor {
 public:
  using value_type = Real;

  BasicTensor() = default;
  explicit BasicTensor(Shape shape, Real fill = Real(0))
      : shape_(shape), data_(shape.size(), fill) {}
  BasicTensor(Shape shape, std::vector<Real> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                  " does not match shape " + to_string(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t batch() const { return shape_.batch; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t time() const { return shape_.time; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  std::span<Real> values() { return data_; }
  std::span<const Real> values() const { return data_; }

  Real& operator[](std::size_t i) { return data_[i]; }
  const Real& operator[](std::size_t i) const { return data_[i]; }

  Real& operator()(std::size_t b, std::size_t c, std::size_t t) {
    return data_[(b * shape_.channels + c) * shape_.time + t];
  }
  const Real& operator()(std::size_t b, std::size_t c, std::size_t t) const {
    return data_[(b * shape_.channels + c) * shape_.time + t];
  }

  // Contiguous time series of one (batch, channel) pair.
  Real* row(std::size_t b, std::size_t c) { return data_.data() + (b * shape_.channels + c) * shape_.time; }
  const Real* row(std::size_t b, std::size_t c) const {
    return data_.data() + (b * shape_.channels + c) * shape_.time;
  }

  void fill(Real v) { std::fill(data_.begin(), data_.end(), v); }
  bool all_finite() const;

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

using Tensor = BasicTensor<float>;

}  // namespace dctts::ad
