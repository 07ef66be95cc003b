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

#include "dctts/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dctts::ad {
namespace {

template <typename Real>
using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using MatMap = Eigen::Map<RowMat<Real>>;
template <typename Real>
using ConstMatMap = Eigen::Map<const RowMat<Real>>;

[[noreturn]] void shape_error(const std::string& op, const std::string& what) {
  throw std::invalid_argument(op + ": " + what);
}

template <typename Real>
Real sigmoid_scalar(Real v) {
  return Real(1) / (Real(1) + std::exp(-v));
}

// Lowers x into (in_channels * kernel, batch * time) so convolution is one GEMM.
template <typename Real>
void im2col(const BasicTensor<Real>& x, const ConvSpec& s, RowMat<Real>& col) {
  const std::size_t B = x.batch(), C = x.channels(), T = x.time(), K = s.kernel;
  const auto pad = static_cast<std::ptrdiff_t>(s.pad_left());
  col.setZero(static_cast<Eigen::Index>(C * K), static_cast<Eigen::Index>(B * T));
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t j = 0; j < K; ++j) {
      Real* dst = col.data() + (c * K + j) * B * T;
      const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(j * s.dilation) - pad;
      for (std::size_t b = 0; b < B; ++b) {
        const Real* src = x.row(b, c);
        Real* out = dst + b * T;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(T),
                                                           static_cast<std::ptrdiff_t>(T) - shift);
        for (std::ptrdiff_t t = lo; t < hi; ++t) out[t] = src[t + shift];
      }
    }
  }
}

template <typename Real>
void col2im_add(const RowMat<Real>& col, const ConvSpec& s, BasicTensor<Real>& dx) {
  const std::size_t B = dx.batch(), C = dx.channels(), T = dx.time(), K = s.kernel;
  const auto pad = static_cast<std::ptrdiff_t>(s.pad_left());
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t j = 0; j < K; ++j) {
      const Real* src = col.data() + (c * K + j) * B * T;
      const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(j * s.dilation) - pad;
      for (std::size_t b = 0; b < B; ++b) {
        Real* dst = dx.row(b, c);
        const Real* in = src + b * T;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(T),
                                                           static_cast<std::ptrdiff_t>(T) - shift);
        for (std::ptrdiff_t t = lo; t < hi; ++t) dst[t + shift] += in[t];
      }
    }
  }
}

// (B, C, T) <-> (C, B*T) reshuffles.
template <typename Real>
RowMat<Real> to_channel_major(const BasicTensor<Real>& x) {
  const std::size_t B = x.batch(), C = x.channels(), T = x.time();
  RowMat<Real> m(static_cast<Eigen::Index>(C), static_cast<Eigen::Index>(B * T));
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c) std::copy_n(x.row(b, c), T, m.data() + c * B * T + b * T);
  return m;
}

template <typename Real>
void add_from_channel_major(const RowMat<Real>& m, BasicTensor<Real>& x) {
  const std::size_t B = x.batch(), C = x.channels(), T = x.time();
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c) {
      Real* dst = x.row(b, c);
      const Real* src = m.data() + c * B * T + b * T;
      for (std::size_t t = 0; t < T; ++t) dst[t] += src[t];
    }
}

template <typename Real>
void require_same_shape(const std::string& op, const Shape& a, const Shape& b) {
  if (a != b) shape_error(op, "shape mismatch " + to_string(a) + " vs " + to_string(b));
}

}  // namespace

std::size_t ConvSpec::pad_left() const {
  const std::size_t total = (kernel - 1) * dilation;
  return causal ? total : total / 2;
}

std::size_t ConvSpec::pad_right() const {
  const std::size_t total = (kernel - 1) * dilation;
  return causal ? 0 : total / 2;
}

void ConvSpec::validate() const {
  if (kernel < 1 || dilation < 1) throw std::invalid_argument("conv1d: kernel and dilation must be >= 1");
  if (in_channels == 0 || out_channels == 0) throw std::invalid_argument("conv1d: channel counts must be positive");
  if (!causal && ((kernel - 1) * dilation) % 2 != 0) {
    throw std::invalid_argument("conv1d: non-causal convolution needs even total padding, got (k-1)*dilation = " +
                                std::to_string((kernel - 1) * dilation));
  }
}

template <typename Real>
Var<Real> conv1d(Var<Real> x, Var<Real> weight, Var<Real> bias, const ConvSpec& spec) {
  spec.validate();
  const auto& xv = x.value();
  if (xv.channels() != spec.in_channels) {
    shape_error("conv1d", "input has " + std::to_string(xv.channels()) + " channels, expected " +
                              std::to_string(spec.in_channels));
  }
  require_same_shape<Real>("conv1d weight", weight.shape(), spec.weight_shape());
  require_same_shape<Real>("conv1d bias", bias.shape(), spec.bias_shape());

  const std::size_t B = xv.batch(), T = xv.time(), O = spec.out_channels;
  const auto rows = static_cast<Eigen::Index>(spec.in_channels * spec.kernel);
  RowMat<Real> col;
  im2col(xv, spec, col);
  ConstMatMap<Real> w(weight.value().data(), static_cast<Eigen::Index>(O), rows);
  RowMat<Real> out_mat(static_cast<Eigen::Index>(O), static_cast<Eigen::Index>(B * T));
  out_mat.noalias() = w * col;

  BasicTensor<Real> out({B, O, T});
  const Real* bv = bias.value().data();
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t o = 0; o < O; ++o) {
      const Real* src = out_mat.data() + o * B * T + b * T;
      Real* dst = out.row(b, o);
      for (std::size_t t = 0; t < T; ++t) dst[t] = src[t] + bv[o];
    }

  return x.tape->record(std::move(out), {x, weight, bias}, [x, weight, bias, spec](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& xv = tape.value(x);
    const std::size_t O = spec.out_channels;
    RowMat<Real> gm = to_channel_major(g);
    if (tape.requires_grad(bias)) {
      auto& db = tape.grad_buffer(bias.id);
      for (std::size_t o = 0; o < O; ++o) db[o] += gm.row(static_cast<Eigen::Index>(o)).sum();
    }
    const bool need_w = tape.requires_grad(weight), need_x = tape.requires_grad(x);
    if (!need_w && !need_x) return;
    const auto rows = static_cast<Eigen::Index>(spec.in_channels * spec.kernel);
    if (need_w) {
      RowMat<Real> col;
      im2col(xv, spec, col);
      MatMap<Real> dw(tape.grad_buffer(weight.id).data(), static_cast<Eigen::Index>(O), rows);
      dw.noalias() += gm * col.transpose();
    }
    if (need_x) {
      ConstMatMap<Real> w(tape.value(weight).data(), static_cast<Eigen::Index>(O), rows);
      RowMat<Real> dcol = w.transpose() * gm;
      col2im_add(dcol, spec, tape.grad_buffer(x.id));
    }
  });
}

template <typename Real>
Var<Real> deconv1d(Var<Real> x, Var<Real> weight, Var<Real> bias) {
  const auto& xv = x.value();
  const auto& ws = weight.shape();
  if (ws.time != 2) shape_error("deconv1d", "kernel size must be 2, weight shape " + to_string(ws));
  if (ws.channels != xv.channels()) {
    shape_error("deconv1d", "input has " + std::to_string(xv.channels()) + " channels, weight expects " +
                                std::to_string(ws.channels));
  }
  const std::size_t B = xv.batch(), I = xv.channels(), T = xv.time(), O = ws.batch;
  require_same_shape<Real>("deconv1d bias", bias.shape(), Shape{1, O, 1});

  // Split (O, I, 2) into per-tap (O, I) matrices.
  auto tap = [](const BasicTensor<Real>& w, std::size_t j) {
    RowMat<Real> m(static_cast<Eigen::Index>(w.batch()), static_cast<Eigen::Index>(w.channels()));
    for (std::size_t o = 0; o < w.batch(); ++o)
      for (std::size_t i = 0; i < w.channels(); ++i) m(o, i) = w(o, i, j);
    return m;
  };

  RowMat<Real> xm = to_channel_major(xv);
  BasicTensor<Real> out({B, O, 2 * T});
  const Real* bv = bias.value().data();
  for (std::size_t j = 0; j < 2; ++j) {
    RowMat<Real> y = tap(weight.value(), j) * xm;
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t o = 0; o < O; ++o) {
        const Real* src = y.data() + o * B * T + b * T;
        Real* dst = out.row(b, o);
        for (std::size_t t = 0; t < T; ++t) dst[2 * t + j] = src[t] + bv[o];
      }
  }

  return x.tape->record(std::move(out), {x, weight, bias}, [x, weight, bias, tap](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& xv = tape.value(x);
    const std::size_t B = xv.batch(), I = xv.channels(), T = xv.time(), O = g.channels();
    RowMat<Real> xm = to_channel_major(xv);
    RowMat<Real> dxm = RowMat<Real>::Zero(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(B * T));
    for (std::size_t j = 0; j < 2; ++j) {
      RowMat<Real> gj(static_cast<Eigen::Index>(O), static_cast<Eigen::Index>(B * T));
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t o = 0; o < O; ++o) {
          const Real* src = g.row(b, o);
          Real* dst = gj.data() + o * B * T + b * T;
          for (std::size_t t = 0; t < T; ++t) dst[t] = src[2 * t + j];
        }
      if (tape.requires_grad(bias) && j == 0) {
        auto& db = tape.grad_buffer(bias.id);
        for (std::size_t o = 0; o < O; ++o) {
          Real acc = 0;
          for (std::size_t b = 0; b < B; ++b) {
            const Real* row = g.row(b, o);
            for (std::size_t t = 0; t < 2 * T; ++t) acc += row[t];
          }
          db[o] += acc;
        }
      }
      if (tape.requires_grad(weight)) {
        RowMat<Real> dw = gj * xm.transpose();
        auto& dwt = tape.grad_buffer(weight.id);
        for (std::size_t o = 0; o < O; ++o)
          for (std::size_t i = 0; i < I; ++i) dwt(o, i, j) += dw(o, i);
      }
      if (tape.requires_grad(x)) dxm.noalias() += tap(tape.value(weight), j).transpose() * gj;
    }
    if (tape.requires_grad(x)) add_from_channel_major(dxm, tape.grad_buffer(x.id));
  });
}

template <typename Real>
Var<Real> highway(Var<Real> x, Var<Real> gates) {
  const auto& xv = x.value();
  const auto& hv = gates.value();
  if (hv.channels() != 2 * xv.channels() || hv.batch() != xv.batch() || hv.time() != xv.time()) {
    shape_error("highway", "gates " + to_string(hv.shape()) + " must have twice the channels of input " +
                               to_string(xv.shape()));
  }
  const std::size_t B = xv.batch(), C = xv.channels(), T = xv.time();
  BasicTensor<Real> out(xv.shape());
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c) {
      const Real* h1 = hv.row(b, c);
      const Real* h2 = hv.row(b, c + C);
      const Real* xi = xv.row(b, c);
      Real* o = out.row(b, c);
      for (std::size_t t = 0; t < T; ++t) {
        const Real s = sigmoid_scalar(h1[t]);
        o[t] = s * h2[t] + (Real(1) - s) * xi[t];
      }
    }
  return x.tape->record(std::move(out), {x, gates}, [x, gates](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& xv = tape.value(x);
    const auto& hv = tape.value(gates);
    const std::size_t B = xv.batch(), C = xv.channels(), T = xv.time();
    const bool need_x = tape.requires_grad(x), need_h = tape.requires_grad(gates);
    BasicTensor<Real>* dx = need_x ? &tape.grad_buffer(x.id) : nullptr;
    BasicTensor<Real>* dh = need_h ? &tape.grad_buffer(gates.id) : nullptr;
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t c = 0; c < C; ++c) {
        const Real* h1 = hv.row(b, c);
        const Real* h2 = hv.row(b, c + C);
        const Real* xi = xv.row(b, c);
        const Real* gi = g.row(b, c);
        for (std::size_t t = 0; t < T; ++t) {
          const Real s = sigmoid_scalar(h1[t]);
          if (dx) dx->row(b, c)[t] += gi[t] * (Real(1) - s);
          if (dh) {
            dh->row(b, c)[t] += gi[t] * (h2[t] - xi[t]) * s * (Real(1) - s);
            dh->row(b, c + C)[t] += gi[t] * s;
          }
        }
      }
  });
}

template <typename Real>
Var<Real> relu(Var<Real> x) {
  BasicTensor<Real> out = x.value();
  for (auto& v : out.values()) v = std::max(v, Real(0));
  return x.tape->record(std::move(out), {x}, [x](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& xv = tape.value(x);
    auto& dx = tape.grad_buffer(x.id);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (xv[i] > Real(0)) dx[i] += g[i];
  });
}

template <typename Real>
Var<Real> sigmoid(Var<Real> x) {
  BasicTensor<Real> out = x.value();
  for (auto& v : out.values()) v = sigmoid_scalar(v);
  return x.tape->record(std::move(out), {x}, [x](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& y = tape.value(self);
    auto& dx = tape.grad_buffer(x.id);
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * y[i] * (Real(1) - y[i]);
  });
}

template <typename Real>
Var<Real> concat_channels(Var<Real> a, Var<Real> b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.batch() != bv.batch() || av.time() != bv.time()) {
    shape_error("concat_channels", "batch/time mismatch " + to_string(av.shape()) + " vs " + to_string(bv.shape()));
  }
  const std::size_t B = av.batch(), Ca = av.channels(), Cb = bv.channels(), T = av.time();
  BasicTensor<Real> out({B, Ca + Cb, T});
  for (std::size_t n = 0; n < B; ++n) {
    std::copy_n(av.row(n, 0), Ca * T, out.row(n, 0));
    std::copy_n(bv.row(n, 0), Cb * T, out.row(n, Ca));
  }
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const std::size_t B = g.batch(), T = g.time();
    const std::size_t Ca = tape.value(a).channels(), Cb = tape.value(b).channels();
    if (tape.requires_grad(a)) {
      auto& da = tape.grad_buffer(a.id);
      for (std::size_t n = 0; n < B; ++n)
        for (std::size_t i = 0; i < Ca * T; ++i) da.row(n, 0)[i] += g.row(n, 0)[i];
    }
    if (tape.requires_grad(b)) {
      auto& db = tape.grad_buffer(b.id);
      for (std::size_t n = 0; n < B; ++n)
        for (std::size_t i = 0; i < Cb * T; ++i) db.row(n, 0)[i] += g.row(n, Ca)[i];
    }
  });
}

template <typename Real>
Var<Real> slice_channels(Var<Real> x, std::size_t begin, std::size_t count) {
  const auto& xv = x.value();
  if (count == 0 || begin + count > xv.channels()) {
    shape_error("slice_channels", "range [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                                      ") outside " + std::to_string(xv.channels()) + " channels");
  }
  const std::size_t B = xv.batch(), T = xv.time();
  BasicTensor<Real> out({B, count, T});
  for (std::size_t n = 0; n < B; ++n) std::copy_n(xv.row(n, begin), count * T, out.row(n, 0));
  return x.tape->record(std::move(out), {x}, [x, begin, count](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    auto& dx = tape.grad_buffer(x.id);
    const std::size_t T = g.time();
    for (std::size_t n = 0; n < g.batch(); ++n)
      for (std::size_t i = 0; i < count * T; ++i) dx.row(n, begin)[i] += g.row(n, 0)[i];
  });
}

template <typename Real>
Var<Real> matmul(Var<Real> a, Var<Real> b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.batch() != bv.batch() || av.time() != bv.channels()) {
    shape_error("matmul", "incompatible " + to_string(av.shape()) + " @ " + to_string(bv.shape()));
  }
  const auto M = static_cast<Eigen::Index>(av.channels()), K = static_cast<Eigen::Index>(av.time()),
             N = static_cast<Eigen::Index>(bv.time());
  BasicTensor<Real> out({av.batch(), av.channels(), bv.time()});
  for (std::size_t n = 0; n < av.batch(); ++n) {
    MatMap<Real>(out.row(n, 0), M, N).noalias() =
        ConstMatMap<Real>(av.row(n, 0), M, K) * ConstMatMap<Real>(bv.row(n, 0), K, N);
  }
  return a.tape->record(std::move(out), {a, b}, [a, b, M, K, N](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& av = tape.value(a);
    const auto& bv = tape.value(b);
    for (std::size_t n = 0; n < g.batch(); ++n) {
      ConstMatMap<Real> gm(g.row(n, 0), M, N);
      if (tape.requires_grad(a))
        MatMap<Real>(tape.grad_buffer(a.id).row(n, 0), M, K).noalias() +=
            gm * ConstMatMap<Real>(bv.row(n, 0), K, N).transpose();
      if (tape.requires_grad(b))
        MatMap<Real>(tape.grad_buffer(b.id).row(n, 0), K, N).noalias() +=
            ConstMatMap<Real>(av.row(n, 0), M, K).transpose() * gm;
    }
  });
}

template <typename Real>
Var<Real> matmul_tn(Var<Real> a, Var<Real> b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.batch() != bv.batch() || av.channels() != bv.channels()) {
    shape_error("matmul_tn", "incompatible " + to_string(av.shape()) + "^T @ " + to_string(bv.shape()));
  }
  const auto K = static_cast<Eigen::Index>(av.channels()), M = static_cast<Eigen::Index>(av.time()),
             N = static_cast<Eigen::Index>(bv.time());
  BasicTensor<Real> out({av.batch(), av.time(), bv.time()});
  for (std::size_t n = 0; n < av.batch(); ++n) {
    MatMap<Real>(out.row(n, 0), M, N).noalias() =
        ConstMatMap<Real>(av.row(n, 0), K, M).transpose() * ConstMatMap<Real>(bv.row(n, 0), K, N);
  }
  return a.tape->record(std::move(out), {a, b}, [a, b, M, K, N](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& av = tape.value(a);
    const auto& bv = tape.value(b);
    for (std::size_t n = 0; n < g.batch(); ++n) {
      ConstMatMap<Real> gm(g.row(n, 0), M, N);
      if (tape.requires_grad(a))
        MatMap<Real>(tape.grad_buffer(a.id).row(n, 0), K, M).noalias() +=
            ConstMatMap<Real>(bv.row(n, 0), K, N) * gm.transpose();
      if (tape.requires_grad(b))
        MatMap<Real>(tape.grad_buffer(b.id).row(n, 0), K, N).noalias() +=
            ConstMatMap<Real>(av.row(n, 0), K, M) * gm;
    }
  });
}

template <typename Real>
Var<Real> softmax_over_rows(Var<Real> x) {
  const auto& xv = x.value();
  const std::size_t B = xv.batch(), C = xv.channels(), T = xv.time();
  if (C == 0) shape_error("softmax_over_rows", "no rows to normalize over");
  BasicTensor<Real> out(xv.shape());
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t t = 0; t < T; ++t) {
      Real mx = xv(b, 0, t);
      for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, xv(b, c, t));
      Real total = 0;
      for (std::size_t c = 0; c < C; ++c) {
        const Real e = std::exp(xv(b, c, t) - mx);
        out(b, c, t) = e;
        total += e;
      }
      for (std::size_t c = 0; c < C; ++c) out(b, c, t) /= total;
    }
  return x.tape->record(std::move(out), {x}, [x](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& y = tape.value(self);
    auto& dx = tape.grad_buffer(x.id);
    for (std::size_t b = 0; b < g.batch(); ++b)
      for (std::size_t t = 0; t < g.time(); ++t) {
        Real dot = 0;
        for (std::size_t c = 0; c < g.channels(); ++c) dot += g(b, c, t) * y(b, c, t);
        for (std::size_t c = 0; c < g.channels(); ++c) dx(b, c, t) += y(b, c, t) * (g(b, c, t) - dot);
      }
  });
}

template <typename Real>
Var<Real> embed(std::span<const std::int32_t> indices, std::size_t batch, Var<Real> table) {
  const auto& tv = table.value();
  if (batch == 0 || indices.size() % batch != 0) {
    shape_error("embed", std::to_string(indices.size()) + " indices do not split into " + std::to_string(batch) +
                             " rows");
  }
  const std::size_t L = indices.size() / batch, E = tv.channels(), V = tv.time();
  for (std::int32_t idx : indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= V) {
      throw std::out_of_range("embed: index " + std::to_string(idx) + " outside vocabulary of " +
                              std::to_string(V));
    }
  }
  std::vector<std::int32_t> ids(indices.begin(), indices.end());
  BasicTensor<Real> out({batch, E, L});
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t e = 0; e < E; ++e)
      for (std::size_t l = 0; l < L; ++l) out(b, e, l) = tv(0, e, static_cast<std::size_t>(ids[b * L + l]));
  return table.tape->record(std::move(out), {table}, [table, ids = std::move(ids)](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    auto& dt = tape.grad_buffer(table.id);
    const std::size_t L = g.time();
    for (std::size_t b = 0; b < g.batch(); ++b)
      for (std::size_t e = 0; e < g.channels(); ++e)
        for (std::size_t l = 0; l < L; ++l) dt(0, e, static_cast<std::size_t>(ids[b * L + l])) += g(b, e, l);
  });
}

template <typename Real>
Var<Real> scale(Var<Real> x, Real factor) {
  BasicTensor<Real> out = x.value();
  for (auto& v : out.values()) v *= factor;
  return x.tape->record(std::move(out), {x}, [x, factor](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    auto& dx = tape.grad_buffer(x.id);
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += factor * g[i];
  });
}

template <typename Real>
Var<Real> add(Var<Real> a, Var<Real> b) {
  require_same_shape<Real>("add", a.shape(), b.shape());
  BasicTensor<Real> out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    for (Var<Real> v : {a, b}) {
      if (!tape.requires_grad(v)) continue;
      auto& d = tape.grad_buffer(v.id);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    }
  });
}

template <typename Real>
Var<Real> mul(Var<Real> a, Var<Real> b) {
  require_same_shape<Real>("mul", a.shape(), b.shape());
  BasicTensor<Real> out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape<Real>& tape, std::uint32_t self) {
    const auto& g = tape.grad(self);
    const auto& av = tape.value(a);
    const auto& bv = tape.value(b);
    if (tape.requires_grad(a)) {
      auto& d = tape.grad_buffer(a.id);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * bv[i];
    }
    if (tape.requires_grad(b)) {
      auto& d = tape.grad_buffer(b.id);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * av[i];
    }
  });
}

template <typename Real>
Var<Real> sum(Var<Real> x) {
  Real acc = 0;
  for (Real v : x.value().values()) acc += v;
  return x.tape->record(BasicTensor<Real>({1, 1, 1}, acc), {x}, [x](Tape<Real>& tape, std::uint32_t self) {
    const Real g = tape.grad(self)[0];
    auto& dx = tape.grad_buffer(x.id);
    for (auto& v : dx.values()) v += g;
  });
}

template <typename Real>
Var<Real> weighted_sum(Var<Real> x, const BasicTensor<Real>& weights, Real denominator) {
  require_same_shape<Real>("weighted_sum", x.shape(), weights.shape());
  if (!(denominator > Real(0))) throw std::invalid_argument("weighted_sum: denominator must be positive");
  const auto& xv = x.value();
  Real acc = 0;
  for (std::size_t i = 0; i < xv.size(); ++i) acc += xv[i] * weights[i];
  return x.tape->record(BasicTensor<Real>({1, 1, 1}, acc / denominator), {x},
                        [x, weights, denominator](Tape<Real>& tape, std::uint32_t self) {
                          const Real g = tape.grad(self)[0] / denominator;
                          auto& dx = tape.grad_buffer(x.id);
                          for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g * weights[i];
                        });
}

template <typename Real>
Var<Real> binary_divergence_logits(Var<Real> logits, const BasicTensor<Real>& target,
                                   const BasicTensor<Real>& weights, Real denominator) {
  require_same_shape<Real>("binary_divergence_logits", logits.shape(), target.shape());
  require_same_shape<Real>("binary_divergence_logits", logits.shape(), weights.shape());
  if (!(denominator > Real(0))) throw std::invalid_argument("binary_divergence_logits: denominator must be positive");
  const auto& z = logits.value();
  Real acc = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (weights[i] == Real(0)) continue;
    const Real softplus = std::max(z[i], Real(0)) + std::log1p(std::exp(-std::abs(z[i])));
    acc += weights[i] * (softplus - target[i] * z[i]);
  }
  return logits.tape->record(BasicTensor<Real>({1, 1, 1}, acc / denominator), {logits},
                             [logits, target, weights, denominator](Tape<Real>& tape, std::uint32_t self) {
                               const Real g = tape.grad(self)[0] / denominator;
                               const auto& z = tape.value(logits);
                               auto& dz = tape.grad_buffer(logits.id);
                               for (std::size_t i = 0; i < z.size(); ++i)
                                 dz[i] += g * weights[i] * (sigmoid_scalar(z[i]) - target[i]);
                             });
}

template <typename Real>
Var<Real> l1_distance(Var<Real> y, const BasicTensor<Real>& target, const BasicTensor<Real>& weights,
                      Real denominator) {
  require_same_shape<Real>("l1_distance", y.shape(), target.shape());
  require_same_shape<Real>("l1_distance", y.shape(), weights.shape());
  if (!(denominator > Real(0))) throw std::invalid_argument("l1_distance: denominator must be positive");
  const auto& yv = y.value();
  Real acc = 0;
  for (std::size_t i = 0; i < yv.size(); ++i) acc += weights[i] * std::abs(yv[i] - target[i]);
  return y.tape->record(BasicTensor<Real>({1, 1, 1}, acc / denominator), {y},
                        [y, target, weights, denominator](Tape<Real>& tape, std::uint32_t self) {
                          const Real g = tape.grad(self)[0] / denominator;
                          const auto& yv = tape.value(y);
                          auto& dy = tape.grad_buffer(y.id);
                          for (std::size_t i = 0; i < yv.size(); ++i) {
                            const Real diff = yv[i] - target[i];
                            const Real sign = diff > 0 ? Real(1) : (diff < 0 ? Real(-1) : Real(0));
                            dy[i] += g * weights[i] * sign;
                          }
                        });
}

#define DCTTS_INSTANTIATE_OPS(Real)                                                                      \
  template Var<Real> conv1d(Var<Real>, Var<Real>, Var<Real>, const ConvSpec&);                           \
  template Var<Real> deconv1d(Var<Real>, Var<Real>, Var<Real>);                                          \
  template Var<Real> highway(Var<Real>, Var<Real>);                                                      \
  template Var<Real> relu(Var<Real>);                                                                    \
  template Var<Real> sigmoid(Var<Real>);                                                                 \
  template Var<Real> concat_channels(Var<Real>, Var<Real>);                                              \
  template Var<Real> slice_channels(Var<Real>, std::size_t, std::size_t);                                \
  template Var<Real> matmul(Var<Real>, Var<Real>);                                                       \
  template Var<Real> matmul_tn(Var<Real>, Var<Real>);                                                    \
  template Var<Real> softmax_over_rows(Var<Real>);                                                       \
  template Var<Real> embed(std::span<const std::int32_t>, std::size_t, Var<Real>);                       \
  template Var<Real> scale(Var<Real>, Real);                                                             \
  template Var<Real> add(Var<Real>, Var<Real>);                                                          \
  template Var<Real> mul(Var<Real>, Var<Real>);                                                          \
  template Var<Real> sum(Var<Real>);                                                                     \
  template Var<Real> weighted_sum(Var<Real>, const BasicTensor<Real>&, Real);                            \
  template Var<Real> binary_divergence_logits(Var<Real>, const BasicTensor<Real>&, const BasicTensor<Real>&, \
                                              Real);                                                     \
  template Var<Real> l1_distance(Var<Real>, const BasicTensor<Real>&, const BasicTensor<Real>&, Real);

DCTTS_INSTANTIATE_OPS(float)
DCTTS_INSTANTIATE_OPS(double)

#undef DCTTS_INSTANTIATE_OPS

}  // namespace dctts::ad
