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

namespace dctts::net {

struct HyperParams {
  std::size_t embed = 128;        // e
  std::size_t hidden = 256;       // d
  std::size_t ssrn = 512;         // c
  std::size_t mel_bands = 80;     // F
  std::size_t linear_bins = 513;  // F'
  std::size_t vocab = 32;

  // Reduced widths for desk-scale experiments; spectrogram sizes unchanged.
  static HyperParams reduced(std::size_t e = 32, std::size_t d = 64, std::size_t c = 64) {
    HyperParams h;
    h.embed = e;
    h.hidden = d;
    h.ssrn = c;
    return h;
  }

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

}  // namespace dctts::net
