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

#include <filesystem>
#include <string>
#include <vector>

#include "dctts/tensor.hpp"

namespace dctts::train {

struct NamedTensor {
  std::string name;
  ad::Tensor value;
};

inline constexpr std::uint32_t kTensorFileVersion = 1;

// Container layout, all integers u32 little-endian:
//   "DCTS" | version | count | count x (name length, UTF-8 name, rank, dims..., float32 data)
// Tensors are written with rank 3; ranks 1 and 2 are accepted on read and
// padded with leading unit dimensions.
void write_tensor_file(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);

// Throws DataError on a missing file, bad magic, unsupported version or truncation.
std::vector<NamedTensor> read_tensor_file(const std::filesystem::path& path);

// Serialized bytes, used for byte-level comparisons.
std::string encode_tensor_file(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> decode_tensor_file(const std::string& bytes, const std::string& origin);

}  // namespace dctts::train
