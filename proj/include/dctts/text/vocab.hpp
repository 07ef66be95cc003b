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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dctts::text {

// NULL, Space, a-z, '.', ',', '\'', '-' in that index order.
inline constexpr std::size_t kVocabSize = 32;
inline constexpr std::int32_t kNull = 0;
inline constexpr std::int32_t kSpace = 1;

using EncodedText = std::vector<std::int32_t>;

// Index of a normalized character, or -1 when it is outside the vocabulary.
std::int32_t char_index(char c);
// Symbol for an index; NULL decodes to '\0'.
char index_char(std::int32_t index);

// Lowercases, drops characters outside the vocabulary, collapses whitespace
// runs to one space and trims the ends. Idempotent.
std::string normalize_text(std::string_view raw);

// Per-character indices, right-padded with NULL to `pad_to` (0 = no padding).
// Throws std::invalid_argument on a character outside the vocabulary or when
// the text is longer than `pad_to`.
EncodedText encode(std::string_view normalized, std::size_t pad_to = 0);

// Inverse of encode(); trailing NULL padding is dropped.
std::string decode(const EncodedText& indices);

// Number of leading non-NULL symbols.
std::size_t unpadded_length(const EncodedText& indices);

}  // namespace dctts::text
