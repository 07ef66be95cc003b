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

#include "dctts/dsp/phase.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "frame_transform.hpp"

namespace dctts::dsp {
namespace {

using cd = std::complex<double>;

constexpr std::size_t kPad = kFftSize / 2;

// Per-bin weight that makes the half-spectrum sum of squares equal the
// time-domain energy of the frame, up to 1/N.
double parseval_weight(std::size_t f) { return (f == 0 || f == kLinearBins - 1) ? 1.0 : 2.0; }

void check_magnitudes(const Spectrogram& m) {
  if (m.bins != kLinearBins || m.frames == 0 || m.values.size() != m.bins * m.frames) {
    throw std::invalid_argument("phase reconstruction expects a (513 x frames) magnitude spectrogram");
  }
}

// Replaces the magnitude of `spec` with the target column, keeping its phase.
// Returns the weighted squared magnitude error before replacement.
double impose_magnitude(const Spectrogram& m, std::size_t t, cd* spec) {
  double err = 0.0;
  for (std::size_t f = 0; f < kLinearBins; ++f) {
    const double target = m(f, t);
    const double a = std::abs(spec[f]);
    err += parseval_weight(f) * (a - target) * (a - target);
    spec[f] = a > 1e-12 ? spec[f] * (target / a) : cd(target, 0.0);
  }
  return err;
}

std::vector<float> trim(const std::vector<double>& num, const std::vector<double>& wsum, std::size_t frames) {
  std::vector<float> out((frames - 1) * kHopSize);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = wsum[i + kPad];
    out[i] = d > 1e-10 ? static_cast<float>(num[i + kPad] / d) : 0.0f;
  }
  return out;
}

// Phase estimate that is exact for stationary sinusoids and even about the
// first frame centre, matching reflection padding. Each bin follows the
// interpolated frequency of the spectral peak that owns it; phase advances by
// that frequency times the hop and alternates in sign across the Hann lobe.
std::vector<cd> initial_spectrum(const Spectrogram& m) {
  const std::size_t frames = m.frames;
  constexpr double two_pi = 6.283185307179586;
  std::vector<double> omega(kLinearBins), prev_omega(kLinearBins), psi(kLinearBins, 0.0), logm(kLinearBins);
  std::vector<std::size_t> peaks;
  std::vector<cd> spec(frames * kLinearBins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < kLinearBins; ++f) logm[f] = std::log(double(m(f, t)) + 1e-12);
    peaks.clear();
    for (std::size_t f = 1; f + 1 < kLinearBins; ++f)
      if (m(f, t) > m(f - 1, t) && m(f, t) >= m(f + 1, t)) peaks.push_back(f);
    for (std::size_t f = 0; f < kLinearBins; ++f) omega[f] = two_pi * double(f) / kFftSize;
    std::size_t lo = 0;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      const std::size_t p = peaks[i];
      std::size_t hi = kLinearBins;
      if (i + 1 < peaks.size()) {
        hi = p;
        for (std::size_t f = p; f < peaks[i + 1]; ++f)
          if (m(f, t) < m(hi, t)) hi = f;
        ++hi;
      }
      const double a = logm[p - 1], b = logm[p], c = logm[p + 1];
      const double den = a - 2.0 * b + c;
      const double delta = den < 0.0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
      const double w = two_pi * (double(p) + delta) / kFftSize;
      for (std::size_t f = lo; f < hi; ++f) omega[f] = w;
      lo = hi;
    }
    for (std::size_t f = 0; f < kLinearBins; ++f) {
      psi[f] = t == 0 ? 0.0 : psi[f] + 0.5 * (prev_omega[f] + omega[f]) * kHopSize;
      psi[f] = std::remainder(psi[f], two_pi);
      const double phase = psi[f] - (f % 2 ? 3.141592653589793 : 0.0);
      spec[t * kLinearBins + f] = std::polar(double(m(f, t)), phase);
    }
    prev_omega.swap(omega);
  }
  return spec;
}

}  // namespace

double spectral_convergence(const Spectrogram& target, std::span<const float> waveform) {
  const Spectrogram est = magnitude(stft(waveform));
  if (est.bins != target.bins || est.frames != target.frames) {
    throw std::invalid_argument("spectral_convergence: waveform yields " + std::to_string(est.frames) +
                                " frames, target has " + std::to_string(target.frames));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    const double d = static_cast<double>(est.values[i]) - target.values[i];
    num += d * d;
    den += static_cast<double>(target.values[i]) * target.values[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

GriffinLimResult griffin_lim(const Spectrogram& m, int iterations) {
  check_magnitudes(m);
  if (iterations <= 0) throw std::invalid_argument("griffin_lim: iterations must be positive");
  const std::size_t frames = m.frames;
  const std::vector<double> wsum = detail::window_square_sum(frames);
  const std::size_t length = (frames - 1) * kHopSize;
  if (length <= kPad) throw std::invalid_argument("griffin_lim: too few frames for reflection padding");

  // The estimate is an unpadded signal; frames see its reflection-padded copy,
  // exactly as stft() does. source[j] is the unpadded index behind padded index j.
  std::vector<std::size_t> source(wsum.size());
  for (std::size_t j = 0; j < source.size(); ++j) {
    auto i = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(kPad);
    const auto last = static_cast<std::ptrdiff_t>(length) - 1;
    if (i < 0) i = -i;
    if (i > last) i = 2 * last - i;
    source[j] = static_cast<std::size_t>(i);
  }
  std::vector<double> weight(length, 0.0);
  for (std::size_t j = 0; j < source.size(); ++j) weight[source[j]] += wsum[j];

  double norm = 0.0;
  for (std::size_t f = 0; f < kLinearBins; ++f)
    for (std::size_t t = 0; t < frames; ++t) norm += parseval_weight(f) * double(m(f, t)) * m(f, t);
  norm = std::sqrt(norm);

  std::vector<cd> spec = initial_spectrum(m);
  detail::FrameTransform ft;
  GriffinLimResult result;
  std::vector<double> num(wsum.size()), folded(length), x(wsum.size());
  for (int it = 0; it < iterations; ++it) {
    // Least-squares signal for the current spectrogram.
    std::fill(num.begin(), num.end(), 0.0);
    for (std::size_t t = 0; t < frames; ++t) ft.synthesize_add(&spec[t * kLinearBins], num.data() + t * kHopSize);
    std::fill(folded.begin(), folded.end(), 0.0);
    for (std::size_t j = 0; j < num.size(); ++j) folded[source[j]] += num[j];
    for (std::size_t i = 0; i < length; ++i) folded[i] = weight[i] > 1e-10 ? folded[i] / weight[i] : 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = folded[source[j]];
    double err = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      ft.analyze(x.data() + t * kHopSize, &spec[t * kLinearBins]);
      err += impose_magnitude(m, t, &spec[t * kLinearBins]);
    }
    result.convergence.push_back(norm > 0.0 ? std::sqrt(err) / norm : std::sqrt(err));
  }
  // The last convergence value was measured on this estimate.
  result.waveform.assign(folded.begin(), folded.end());
  return result;
}

std::vector<float> rtisi_la(const Spectrogram& m, int lookahead, int iterations) {
  check_magnitudes(m);
  if (lookahead <= 0 || iterations <= 0) {
    throw std::invalid_argument("rtisi_la: look-ahead and iteration counts must be positive");
  }
  const std::size_t frames = m.frames;
  const auto la = static_cast<std::size_t>(lookahead);
  const std::vector<double> wsum = detail::window_square_sum(frames);
  std::vector<double> committed(wsum.size(), 0.0), pending(wsum.size(), 0.0);
  std::vector<cd> spec(frames * kLinearBins);
  const std::vector<cd> guess = initial_spectrum(m);
  std::vector<double> x(kFftSize);
  detail::FrameTransform ft;

  // Current estimate of the signal under frame t from committed and pending frames.
  auto estimate_frame = [&](std::size_t t) {
    const std::size_t base = t * kHopSize;
    for (std::size_t n = 0; n < kFftSize; ++n) {
      const double d = wsum[base + n];
      x[n] = d > 1e-10 ? (committed[base + n] + pending[base + n]) / d : 0.0;
    }
  };
  // Re-synthesizes pending frames [first, end) after clearing from frame `clear_from`.
  auto rebuild_pending = [&](std::size_t clear_from, std::size_t first, std::size_t end) {
    const std::size_t lo = clear_from * kHopSize;
    const std::size_t hi = std::max(lo, (end - 1) * kHopSize + kFftSize);
    std::fill(pending.begin() + static_cast<std::ptrdiff_t>(lo), pending.begin() + static_cast<std::ptrdiff_t>(hi), 0.0);
    for (std::size_t t = first; t < end; ++t) ft.synthesize_add(&spec[t * kLinearBins], pending.data() + t * kHopSize);
  };

  std::size_t entered = 0;
  for (std::size_t c = 0; c < frames; ++c) {
    while (entered < std::min(frames, c + la)) {
      cd* s = &spec[entered * kLinearBins];
      std::copy_n(&guess[entered * kLinearBins], kLinearBins, s);
      ft.synthesize_add(s, pending.data() + entered * kHopSize);
      ++entered;
    }
    for (int it = 0; it < iterations; ++it) {
      // Jacobi sweep: all buffer frames are analysed against the same estimate.
      std::vector<cd> next(spec.begin() + static_cast<std::ptrdiff_t>(c * kLinearBins),
                           spec.begin() + static_cast<std::ptrdiff_t>(entered * kLinearBins));
      for (std::size_t t = c; t < entered; ++t) {
        estimate_frame(t);
        cd* s = &next[(t - c) * kLinearBins];
        ft.analyze(x.data(), s);
        impose_magnitude(m, t, s);
      }
      std::copy(next.begin(), next.end(), spec.begin() + static_cast<std::ptrdiff_t>(c * kLinearBins));
      rebuild_pending(c, c, entered);
    }
    ft.synthesize_add(&spec[c * kLinearBins], committed.data() + c * kHopSize);
    rebuild_pending(c, c + 1, entered);
  }
  return trim(committed, wsum, frames);
}

}  // namespace dctts::dsp
