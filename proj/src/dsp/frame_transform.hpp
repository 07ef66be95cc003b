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

#include <unsupported/Eigen/FFT>

#include <complex>
#include <vector>

#include "dctts/dsp/spectrogram.hpp"

namespace dctts::dsp::detail {

// Windowed real FFT of one 1024-sample frame and its windowed inverse.
class FrameTransform {
 public:
  FrameTransform() : time_(kFftSize), freq_(kLinearBins) { fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum); }

  // Writes kLinearBins coefficients.
  void analyze(const double* frame, std::complex<double>* out) {
    const auto& w = hann_window();
    for (std::size_t n = 0; n < kFftSize; ++n) time_[n] = frame[n] * w[n];
    fft_.fwd(freq_, time_);
    std::copy_n(freq_.begin(), kLinearBins, out);
  }

  // Inverse FFT multiplied by the synthesis window, added into `out`.
  void synthesize_add(const std::complex<double>* in, double* out) {
    const auto& w = hann_window();
    freq_.assign(in, in + kLinearBins);
    fft_.inv(time_, freq_, kFftSize);
    for (std::size_t n = 0; n < kFftSize; ++n) out[n] += time_[n] * w[n];
  }

 private:
  Eigen::FFT<double> fft_;
  std::vector<double> time_;
  std::vector<std::complex<double>> freq_;
};

// Sum over frames of the squared window, over an untrimmed signal of
// (frames - 1) * hop + fft samples.
std::vector<double> window_square_sum(std::size_t frames);

}  // namespace dctts::dsp::detail
