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

#include "dctts/text/vocab.hpp"

#include <algorithm>
#include <stdexcept>

namespace dctts::text {

std::int32_t char_index(char c) {
  if (c >= 'a' && c <= 'z') return 2 + (c - 'a');
  switch (c) {
    case ' ': return kSpace;
    case '.': return 28;
    case ',': return 29;
    case '\'': return 30;
    case '-': return 31;
    default: return -1;
  }
}

char index_char(std::int32_t index) {
  if (index == kNull) return '\0';
  if (index == kSpace) return ' ';
  if (index >= 2 && index < 28) return static_cast<char>('a' + (index - 2));
  switch (index) {
    case 28: return '.';
    case 29: return ',';
    case 30: return '\'';
    case 31: return '-';
    default: throw std::out_of_range("vocabulary index " + std::to_string(index) + " out of range");
  }
}

std::string normalize_text(std::string_view raw) {
  std::string kept;
  kept.reserve(raw.size());
  for (char ch : raw) {
    const auto u = static_cast<unsigned char>(ch);
    if (u >= 0x80) continue;  // non-ASCII UTF-8 bytes
    char c = ch;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') c = ' ';
    if (char_index(c) >= 0) kept.push_back(c);
  }
  std::string out;
  out.reserve(kept.size());
  for (char c : kept) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

EncodedText encode(std::string_view normalized, std::size_t pad_to) {
  if (pad_to != 0 && normalized.size() > pad_to) {
    throw std::invalid_argument("text of length " + std::to_string(normalized.size()) + " exceeds pad width " +
                                std::to_string(pad_to));
  }
  EncodedText out;
  out.reserve(std::max(pad_to, normalized.size()));
  for (char c : normalized) {
    const std::int32_t idx = char_index(c);
    if (idx < 0) {
      throw std::invalid_argument(std::string("character '") + c + "' is not in the vocabulary; normalize first");
    }
    out.push_back(idx);
  }
  out.resize(std::max(pad_to, out.size()), kNull);
  return out;
}

std::string decode(const EncodedText& indices) {
  std::string out;
  for (std::int32_t idx : indices) {
    if (idx == kNull) break;
    out.push_back(index_char(idx));
  }
  return out;
}

std::size_t unpadded_length(const EncodedText& indices) {
  std::size_t n = 0;
  while (n < indices.size() && indices[n] != kNull) ++n;
  return n;
}

}  // namespace dctts::text
