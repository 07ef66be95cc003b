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

namespace dctts::io {

// Binary 8-bit grayscale image ("P5"). `values` is row-major rows x cols in
// [0, 1]; 1 is white. Values outside the range are clamped.
std::string encode_pgm(const std::vector<float>& values, std::size_t rows, std::size_t cols);
void write_pgm(const std::filesystem::path& path, const std::vector<float>& values, std::size_t rows,
               std::size_t cols);

}  // namespace dctts::io
