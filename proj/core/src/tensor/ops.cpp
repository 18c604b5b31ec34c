// Copyright 2026 The w2sc Authors
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
#include "w2sc/tensor/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "w2sc/error.hpp"

namespace w2sc::ad {
namespace {

using Eigen::Index;

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using CMapMat = Eigen::Map<const RowMat<T>>;
template <typename T>
using MapVec = Eigen::Map<Eigen::Array<T, Eigen::Dynamic, 1>>;
template <typename T>
using CMapVec = Eigen::Map<const Eigen::Array<T, Eigen::Dynamic, 1>>;

Index ix(std::size_t v) { return static_cast<Index>(v); }

template <typename T>
using StoragePtr = std::shared_ptr<TensorStorage<T>>;

template <typename T>
void finish(Tape<T>& tape, const Tensor<T>& y, const char* op) {
  if (!tape.check_finite()) return;
  if (!CMapVec<T>(y.data(), ix(y.size())).allFinite()) {
    throw NonFiniteError(std::string(op) + ": non-finite value in output");
  }
}

template <typename T>
bool wants(const StoragePtr<T>& s) {
  return s && s->requires_grad;
}

template <typename T>
T* grad_of(const StoragePtr<T>& s) {
  s->ensure_grad();
  return s->grad.data();
}

void require_rank(const Shape& s, std::size_t rank, const char* op, const char* what) {
  if (s.size() != rank) {
    throw ShapeError(std::string(op) + ": " + what + " must have rank " + std::to_string(rank) +
                     ", got " + shape_string(s));
  }
}

void require_same(const Shape& a, const Shape& b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " +
                     shape_string(b));
  }
}

// Geometry of a strided, padded convolution over an image of C x H x W.
struct ConvGeom {
  std::size_t c = 0, h = 0, w = 0;
  std::size_t kh = 0, kw = 0, sh = 1, sw = 1;
  std::size_t pt = 0, pl = 0;
  std::size_t oh = 0, ow = 0;

  std::size_t rows() const { return c * kh * kw; }
  std::size_t cols() const { return oh * ow; }
  bool pointwise() const { return kh == 1 && kw == 1 && sh == 1 && sw == 1 && pt == 0 && pl == 0; }
};

// cols[r, n*P + p] for one sample; ld is the row stride of cols.
template <typename T>
void im2col(const ConvGeom& g, const T* image, T* cols, std::size_t ld, std::size_t offset) {
  for (std::size_t c = 0; c < g.c; ++c) {
    const T* plane = image + c * g.h * g.w;
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        T* row = cols + ((c * g.kh + i) * g.kw + j) * ld + offset;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<std::ptrdiff_t>(oy * g.sh + i) - static_cast<std::ptrdiff_t>(g.pt);
          T* out = row + oy * g.ow;
          if (y < 0 || y >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(out, out + g.ow, T(0));
            continue;
          }
          const T* src = plane + static_cast<std::size_t>(y) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto x = static_cast<std::ptrdiff_t>(ox * g.sw + j) - static_cast<std::ptrdiff_t>(g.pl);
            out[ox] = (x < 0 || x >= static_cast<std::ptrdiff_t>(g.w)) ? T(0) : src[x];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: accumulates columns back into the image.
template <typename T>
void col2im(const ConvGeom& g, const T* cols, std::size_t ld, std::size_t offset, T* image) {
  for (std::size_t c = 0; c < g.c; ++c) {
    T* plane = image + c * g.h * g.w;
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        const T* row = cols + ((c * g.kh + i) * g.kw + j) * ld + offset;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<std::ptrdiff_t>(oy * g.sh + i) - static_cast<std::ptrdiff_t>(g.pt);
          if (y < 0 || y >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* dst = plane + static_cast<std::size_t>(y) * g.w;
          const T* in = row + oy * g.ow;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto x = static_cast<std::ptrdiff_t>(ox * g.sw + j) - static_cast<std::ptrdiff_t>(g.pl);
            if (x >= 0 && x < static_cast<std::ptrdiff_t>(g.w)) dst[x] += in[ox];
          }
        }
      }
    }
  }
}

// [N, C, P] <-> [C, N*P]
template <typename T>
void to_channel_major(const T* src, std::size_t n, std::size_t c, std::size_t p, T* dst) {
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t k = 0; k < c; ++k)
      std::copy_n(src + (b * c + k) * p, p, dst + k * n * p + b * p);
}

template <typename T>
void add_from_channel_major(const T* src, std::size_t n, std::size_t c, std::size_t p, T* dst) {
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t k = 0; k < c; ++k) {
      const T* s = src + k * n * p + b * p;
      T* d = dst + (b * c + k) * p;
      for (std::size_t i = 0; i < p; ++i) d[i] += s[i];
    }
}

void check_bias(const Shape& bias, std::size_t channels, const char* op) {
  if (bias.size() != 1 || bias[0] != channels) {
    throw ShapeError(std::string(op) + ": bias must be [" + std::to_string(channels) + "], got " +
                     shape_string(bias));
  }
}

template <typename T>
Tensor<T> unary(Tape<T>& tape, const Tensor<T>& x, const char* op, auto fwd, auto deriv) {
  Tensor<T> y(x.shape());
  const T* xv = x.data();
  T* yv = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) yv[i] = fwd(xv[i]);
  finish(tape, y, op);
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), deriv] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      for (std::size_t i = 0; i < xs->value.size(); ++i)
        gx[i] += ys->grad[i] * deriv(xs->value[i], ys->value[i]);
    });
  }
  return y;
}

// Shared implementation of row-wise reductions over [N, ...].
template <typename T>
Tensor<T> row_reduce(Tape<T>& tape, const Tensor<T>& x, const char* op, auto fwd, auto deriv) {
  if (x.rank() < 1) throw ShapeError(std::string(op) + ": rank must be >= 1");
  const std::size_t n = x.dim(0);
  const std::size_t d = n == 0 ? 0 : x.size() / n;
  Tensor<T> y(Shape{n});
  for (std::size_t r = 0; r < n; ++r) y.data()[r] = fwd(x.data() + r * d, d);
  finish(tape, y, op);
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), n, d, deriv] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      for (std::size_t r = 0; r < n; ++r) {
        const T g = ys->grad[r];
        const T out = ys->value[r];
        for (std::size_t i = 0; i < d; ++i)
          gx[r * d + i] += g * deriv(xs->value[r * d + i], out);
      }
    });
  }
  return y;
}

// Numerically shifted softmax of each contiguous row.
template <typename T>
void softmax_rows_inplace(T* data, std::size_t rows, std::size_t len) {
  for (std::size_t r = 0; r < rows; ++r) {
    MapVec<T> row(data + r * len, ix(len));
    const T mx = row.maxCoeff();
    row = (row - mx).exp();
    row *= T(1) / row.sum();
  }
}

}  // namespace

std::size_t conv_output_size(std::size_t in, std::size_t kernel, std::size_t stride, Padding p) {
  if (stride == 0 || kernel == 0) throw InvalidArgument("conv: kernel and stride must be positive");
  if (p == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) return 0;
  return (in - kernel) / stride + 1;
}

std::pair<std::size_t, std::size_t> same_padding(std::size_t in, std::size_t out,
                                                 std::size_t kernel, std::size_t stride) {
  const std::size_t need = (out == 0 ? 0 : (out - 1) * stride) + kernel;
  const std::size_t total = need > in ? need - in : 0;
  return {total / 2, total - total / 2};
}

template <typename T>
Tensor<T> conv2d(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                 const Tensor<T>& bias, Stride2 stride, Padding padding) {
  require_rank(x.shape(), 4, "conv2d", "input");
  require_rank(weight.shape(), 4, "conv2d", "weight");
  const std::size_t n = x.dim(0);
  const std::size_t co = weight.dim(0);
  if (weight.dim(1) != x.dim(1)) {
    throw ShapeError("conv2d: weight " + shape_string(weight.shape()) + " does not match input " +
                     shape_string(x.shape()));
  }
  if (bias.defined()) check_bias(bias.shape(), co, "conv2d");
  ConvGeom g;
  g.c = x.dim(1);
  g.h = x.dim(2);
  g.w = x.dim(3);
  g.kh = weight.dim(2);
  g.kw = weight.dim(3);
  g.sh = stride.h;
  g.sw = stride.w;
  g.oh = conv_output_size(g.h, g.kh, g.sh, padding);
  g.ow = conv_output_size(g.w, g.kw, g.sw, padding);
  if (g.oh == 0 || g.ow == 0) {
    throw ShapeError("conv2d: kernel " + shape_string(weight.shape()) + " larger than input " +
                     shape_string(x.shape()));
  }
  if (padding == Padding::kSame) {
    g.pt = same_padding(g.h, g.oh, g.kh, g.sh).first;
    g.pl = same_padding(g.w, g.ow, g.kw, g.sw).first;
  }
  const std::size_t p = g.cols();
  const std::size_t k = g.rows();
  const std::size_t in_sz = g.c * g.h * g.w;

  Tensor<T> y(Shape{n, co, g.oh, g.ow});
  CMapMat<T> wm(weight.data(), ix(co), ix(k));
  if (g.pointwise()) {
    for (std::size_t b = 0; b < n; ++b) {
      MapMat<T>(y.data() + b * co * p, ix(co), ix(p)).noalias() =
          wm * CMapMat<T>(x.data() + b * in_sz, ix(g.c), ix(p));
    }
  } else {
    // One product per sample, so a sample's output does not depend on the
    // batch it is computed in.
    RowMat<T> cols(ix(k), ix(p));
    for (std::size_t b = 0; b < n; ++b) {
      im2col(g, x.data() + b * in_sz, cols.data(), p, 0);
      MapMat<T>(y.data() + b * co * p, ix(co), ix(p)).noalias() = wm * cols;
    }
  }
  if (bias.defined()) {
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < co; ++c) {
        MapVec<T>(y.data() + (b * co + c) * p, ix(p)) += bias.data()[c];
      }
  }
  finish(tape, y, "conv2d");

  if (tape.needs_grad({&x, &weight, &bias})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), ws = weight.storage(), bs = bias.storage(), g, n,
               co] {
      if (ys->grad.empty()) return;
      const std::size_t p = g.cols();
      const std::size_t k = g.rows();
      const std::size_t in_sz = g.c * g.h * g.w;
      const T* dy = ys->grad.data();
      if (wants(bs)) {
        T* db = grad_of(bs);
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < co; ++c) db[c] += CMapVec<T>(dy + (b * co + c) * p, ix(p)).sum();
      }
      CMapMat<T> wm(ws->value.data(), ix(co), ix(k));
      if (g.pointwise()) {
        for (std::size_t b = 0; b < n; ++b) {
          CMapMat<T> dyb(dy + b * co * p, ix(co), ix(p));
          if (wants(ws))
            MapMat<T>(grad_of(ws), ix(co), ix(k)).noalias() +=
                dyb * CMapMat<T>(xs->value.data() + b * in_sz, ix(g.c), ix(p)).transpose();
          if (wants(xs))
            MapMat<T>(grad_of(xs) + b * in_sz, ix(g.c), ix(p)).noalias() += wm.transpose() * dyb;
        }
        return;
      }
      RowMat<T> dyall(ix(co), ix(n * p));
      to_channel_major(dy, n, co, p, dyall.data());
      if (wants(ws)) {
        RowMat<T> cols(ix(k), ix(n * p));
        for (std::size_t b = 0; b < n; ++b)
          im2col(g, xs->value.data() + b * in_sz, cols.data(), n * p, b * p);
        MapMat<T>(grad_of(ws), ix(co), ix(k)).noalias() += dyall * cols.transpose();
      }
      if (wants(xs)) {
        RowMat<T> dcols = wm.transpose() * dyall;
        T* dx = grad_of(xs);
        for (std::size_t b = 0; b < n; ++b) col2im(g, dcols.data(), n * p, b * p, dx + b * in_sz);
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> conv2d_transpose(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                           const Tensor<T>& bias, Stride2 stride, Padding padding) {
  require_rank(x.shape(), 4, "conv2d_transpose", "input");
  require_rank(weight.shape(), 4, "conv2d_transpose", "weight");
  const std::size_t n = x.dim(0);
  const std::size_t ci = x.dim(1);
  const std::size_t hi = x.dim(2);
  const std::size_t wi = x.dim(3);
  if (weight.dim(0) != ci) {
    throw ShapeError("conv2d_transpose: weight " + shape_string(weight.shape()) +
                     " does not match input " + shape_string(x.shape()));
  }
  if (stride.h == 0 || stride.w == 0) throw InvalidArgument("conv2d_transpose: zero stride");
  const std::size_t co = weight.dim(1);
  if (bias.defined()) check_bias(bias.shape(), co, "conv2d_transpose");
  ConvGeom g;
  g.c = co;
  g.kh = weight.dim(2);
  g.kw = weight.dim(3);
  g.sh = stride.h;
  g.sw = stride.w;
  g.oh = hi;
  g.ow = wi;
  if (padding == Padding::kSame) {
    g.h = hi * g.sh;
    g.w = wi * g.sw;
    g.pt = same_padding(g.h, hi, g.kh, g.sh).first;
    g.pl = same_padding(g.w, wi, g.kw, g.sw).first;
  } else {
    g.h = (hi - 1) * g.sh + g.kh;
    g.w = (wi - 1) * g.sw + g.kw;
  }
  const std::size_t p = g.cols();
  const std::size_t k = g.rows();
  const std::size_t out_sz = co * g.h * g.w;

  Tensor<T> y(Shape{n, co, g.h, g.w});
  CMapMat<T> wm(weight.data(), ix(ci), ix(k));
  {
    RowMat<T> cols(ix(k), ix(p));
    for (std::size_t b = 0; b < n; ++b) {
      cols.noalias() = wm.transpose() * CMapMat<T>(x.data() + b * ci * p, ix(ci), ix(p));
      col2im(g, cols.data(), p, 0, y.data() + b * out_sz);
    }
  }
  const std::size_t plane = g.h * g.w;
  if (bias.defined()) {
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < co; ++c)
        MapVec<T>(y.data() + (b * co + c) * plane, ix(plane)) += bias.data()[c];
  }
  finish(tape, y, "conv2d_transpose");

  if (tape.needs_grad({&x, &weight, &bias})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), ws = weight.storage(), bs = bias.storage(), g, n,
               ci, co] {
      if (ys->grad.empty()) return;
      const std::size_t p = g.cols();
      const std::size_t k = g.rows();
      const std::size_t plane = g.h * g.w;
      const std::size_t out_sz = co * plane;
      const T* dy = ys->grad.data();
      if (wants(bs)) {
        T* db = grad_of(bs);
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < co; ++c)
            db[c] += CMapVec<T>(dy + (b * co + c) * plane, ix(plane)).sum();
      }
      RowMat<T> dcols(ix(k), ix(n * p));
      for (std::size_t b = 0; b < n; ++b) im2col(g, dy + b * out_sz, dcols.data(), n * p, b * p);
      if (wants(ws)) {
        RowMat<T> xall(ix(ci), ix(n * p));
        to_channel_major(xs->value.data(), n, ci, p, xall.data());
        MapMat<T>(grad_of(ws), ix(ci), ix(k)).noalias() += xall * dcols.transpose();
      }
      if (wants(xs)) {
        CMapMat<T> wm(ws->value.data(), ix(ci), ix(k));
        RowMat<T> dxall = wm * dcols;
        add_from_channel_major(dxall.data(), n, ci, p, grad_of(xs));
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> pad2d(Tape<T>& tape, const Tensor<T>& x, Pad2 pad) {
  require_rank(x.shape(), 4, "pad2d", "input");
  const std::size_t nc = x.dim(0) * x.dim(1);
  const std::size_t h = x.dim(2);
  const std::size_t w = x.dim(3);
  const std::size_t oh = h + pad.top + pad.bottom;
  const std::size_t ow = w + pad.left + pad.right;
  Tensor<T> y(Shape{x.dim(0), x.dim(1), oh, ow});
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t i = 0; i < h; ++i)
      std::copy_n(x.data() + (c * h + i) * w, w, y.data() + (c * oh + i + pad.top) * ow + pad.left);
  finish(tape, y, "pad2d");
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), nc, h, w, oh, ow, pad] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t i = 0; i < h; ++i) {
          const T* src = ys->grad.data() + (c * oh + i + pad.top) * ow + pad.left;
          T* dst = gx + (c * h + i) * w;
          for (std::size_t j = 0; j < w; ++j) dst[j] += src[j];
        }
    });
  }
  return y;
}

template <typename T>
Tensor<T> concat_channels(Tape<T>& tape, std::span<const Tensor<T>> parts) {
  if (parts.empty()) throw InvalidArgument("concat_channels: no inputs");
  const Shape& first = parts[0].shape();
  if (first.size() < 2) throw ShapeError("concat_channels: rank must be >= 2");
  std::size_t total_c = 0;
  for (const auto& t : parts) {
    Shape a = t.shape();
    Shape b = first;
    if (a.size() != b.size()) require_same(a, b, "concat_channels");
    a[1] = b[1] = 0;
    require_same(a, b, "concat_channels");
    total_c += t.dim(1);
  }
  const std::size_t n = first[0];
  std::size_t inner = 1;
  for (std::size_t i = 2; i < first.size(); ++i) inner *= first[i];
  Shape out_shape = first;
  out_shape[1] = total_c;
  Tensor<T> y(out_shape);
  std::size_t offset = 0;
  for (const auto& t : parts) {
    const std::size_t chunk = t.dim(1) * inner;
    for (std::size_t b = 0; b < n; ++b)
      std::copy_n(t.data() + b * chunk, chunk, y.data() + b * total_c * inner + offset);
    offset += chunk;
  }
  finish(tape, y, "concat_channels");
  bool any = false;
  for (const auto& t : parts) any = any || tape.needs_grad({&t});
  if (any) {
    y.set_requires_grad(true);
    std::vector<StoragePtr<T>> stores;
    for (const auto& t : parts) stores.push_back(t.storage());
    tape.push([ys = y.storage(), stores, n, inner, total_c] {
      if (ys->grad.empty()) return;
      std::size_t offset = 0;
      for (const auto& s : stores) {
        const std::size_t chunk = s->shape[1] * inner;
        if (wants(s)) {
          T* gx = grad_of(s);
          for (std::size_t b = 0; b < n; ++b) {
            const T* src = ys->grad.data() + b * total_c * inner + offset;
            for (std::size_t i = 0; i < chunk; ++i) gx[b * chunk + i] += src[i];
          }
        }
        offset += chunk;
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> reshape(Tape<T>& tape, const Tensor<T>& x, Shape shape) {
  if (numel(shape) != x.size()) {
    throw ShapeError("reshape: cannot view " + shape_string(x.shape()) + " as " +
                     shape_string(shape));
  }
  Tensor<T> y(std::move(shape), std::vector<T>(x.values().begin(), x.values().end()));
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage()] {
      if (ys->grad.empty()) return;
      MapVec<T>(grad_of(xs), ix(xs->value.size())) += CMapVec<T>(ys->grad.data(), ix(ys->grad.size()));
    });
  }
  return y;
}

template <typename T>
Tensor<T> transpose_last2(Tape<T>& tape, const Tensor<T>& x) {
  if (x.rank() < 2) throw ShapeError("transpose_last2: rank must be >= 2");
  const std::size_t m = x.dim(x.rank() - 2);
  const std::size_t n = x.dim(x.rank() - 1);
  const std::size_t batch = x.size() / std::max<std::size_t>(m * n, 1);
  Shape s = x.shape();
  std::swap(s[s.size() - 2], s[s.size() - 1]);
  Tensor<T> y(s);
  for (std::size_t b = 0; b < batch; ++b)
    MapMat<T>(y.data() + b * m * n, ix(n), ix(m)) = CMapMat<T>(x.data() + b * m * n, ix(m), ix(n)).transpose();
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), batch, m, n] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      for (std::size_t b = 0; b < batch; ++b)
        MapMat<T>(gx + b * m * n, ix(m), ix(n)) +=
            CMapMat<T>(ys->grad.data() + b * m * n, ix(n), ix(m)).transpose();
    });
  }
  return y;
}

template <typename T>
Tensor<T> matmul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b, bool trans_a,
                 bool trans_b) {
  if (a.rank() != b.rank() || (a.rank() != 2 && a.rank() != 3)) {
    throw ShapeError("matmul: operands must both be rank 2 or rank 3, got " +
                     shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  const bool batched = a.rank() == 3;
  const std::size_t batch = batched ? a.dim(0) : 1;
  if (batched && b.dim(0) != batch) throw ShapeError("matmul: batch extents differ");
  const std::size_t ar = a.dim(a.rank() - 2), ac = a.dim(a.rank() - 1);
  const std::size_t br = b.dim(b.rank() - 2), bc = b.dim(b.rank() - 1);
  const std::size_t m = trans_a ? ac : ar;
  const std::size_t ka = trans_a ? ar : ac;
  const std::size_t kb = trans_b ? bc : br;
  const std::size_t nn = trans_b ? br : bc;
  if (ka != kb) {
    throw ShapeError("matmul: inner extents differ for " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()));
  }
  Shape out = batched ? Shape{batch, m, nn} : Shape{m, nn};
  Tensor<T> y(out);
  for (std::size_t i = 0; i < batch; ++i) {
    CMapMat<T> am(a.data() + i * ar * ac, ix(ar), ix(ac));
    CMapMat<T> bm(b.data() + i * br * bc, ix(br), ix(bc));
    MapMat<T> ym(y.data() + i * m * nn, ix(m), ix(nn));
    if (!trans_a && !trans_b) ym.noalias() = am * bm;
    else if (trans_a && !trans_b) ym.noalias() = am.transpose() * bm;
    else if (!trans_a && trans_b) ym.noalias() = am * bm.transpose();
    else ym.noalias() = am.transpose() * bm.transpose();
  }
  finish(tape, y, "matmul");
  if (tape.needs_grad({&a, &b})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), as = a.storage(), bs = b.storage(), batch, ar, ac, br, bc, m, nn,
               trans_a, trans_b] {
      if (ys->grad.empty()) return;
      for (std::size_t i = 0; i < batch; ++i) {
        CMapMat<T> dy(ys->grad.data() + i * m * nn, ix(m), ix(nn));
        CMapMat<T> am(as->value.data() + i * ar * ac, ix(ar), ix(ac));
        CMapMat<T> bm(bs->value.data() + i * br * bc, ix(br), ix(bc));
        if (wants(as)) {
          MapMat<T> da(grad_of(as) + i * ar * ac, ix(ar), ix(ac));
          // d op(A) = dY op(B)^T
          if (!trans_a && !trans_b) da.noalias() += dy * bm.transpose();
          else if (!trans_a && trans_b) da.noalias() += dy * bm;
          else if (trans_a && !trans_b) da.noalias() += bm * dy.transpose();
          else da.noalias() += bm.transpose() * dy.transpose();
        }
        if (wants(bs)) {
          MapMat<T> db(grad_of(bs) + i * br * bc, ix(br), ix(bc));
          // d op(B) = op(A)^T dY
          if (!trans_a && !trans_b) db.noalias() += am.transpose() * dy;
          else if (trans_a && !trans_b) db.noalias() += am * dy;
          else if (!trans_a && trans_b) db.noalias() += dy.transpose() * am;
          else db.noalias() += dy.transpose() * am.transpose();
        }
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                 const Tensor<T>& bias) {
  require_rank(x.shape(), 2, "linear", "input");
  require_rank(weight.shape(), 2, "linear", "weight");
  if (x.dim(1) != weight.dim(1)) {
    throw ShapeError("linear: input " + shape_string(x.shape()) + " does not match weight " +
                     shape_string(weight.shape()));
  }
  const std::size_t n = x.dim(0), in = x.dim(1), out = weight.dim(0);
  if (bias.defined()) check_bias(bias.shape(), out, "linear");
  Tensor<T> y(Shape{n, out});
  MapMat<T> ym(y.data(), ix(n), ix(out));
  ym.noalias() = CMapMat<T>(x.data(), ix(n), ix(in)) * CMapMat<T>(weight.data(), ix(out), ix(in)).transpose();
  if (bias.defined()) {
    ym.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(bias.data(), ix(out));
  }
  finish(tape, y, "linear");
  if (tape.needs_grad({&x, &weight, &bias})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), ws = weight.storage(), bs = bias.storage(), n, in,
               out] {
      if (ys->grad.empty()) return;
      CMapMat<T> dy(ys->grad.data(), ix(n), ix(out));
      if (wants(bs)) {
        Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(grad_of(bs), ix(out)) += dy.colwise().sum();
      }
      if (wants(ws)) {
        MapMat<T>(grad_of(ws), ix(out), ix(in)).noalias() +=
            dy.transpose() * CMapMat<T>(xs->value.data(), ix(n), ix(in));
      }
      if (wants(xs)) {
        MapMat<T>(grad_of(xs), ix(n), ix(in)).noalias() +=
            dy * CMapMat<T>(ws->value.data(), ix(out), ix(in));
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> softmax(Tape<T>& tape, const Tensor<T>& x, int axis) {
  const int rank = static_cast<int>(x.rank());
  const int ax = axis < 0 ? axis + rank : axis;
  if (ax < 0 || ax >= rank) throw InvalidArgument("softmax: axis out of range");
  std::size_t outer = 1, inner = 1;
  for (int i = 0; i < ax; ++i) outer *= x.dim(static_cast<std::size_t>(i));
  for (int i = ax + 1; i < rank; ++i) inner *= x.dim(static_cast<std::size_t>(i));
  const std::size_t len = x.dim(static_cast<std::size_t>(ax));
  Tensor<T> y(x.shape());
  if (inner == 1) {
    std::copy_n(x.data(), x.size(), y.data());
    softmax_rows_inplace(y.data(), outer, len);
  } else {
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        const T* xp = x.data() + o * len * inner + i;
        T* yp = y.data() + o * len * inner + i;
        T mx = xp[0];
        for (std::size_t l = 1; l < len; ++l) mx = std::max(mx, xp[l * inner]);
        T s = 0;
        for (std::size_t l = 0; l < len; ++l) s += (yp[l * inner] = std::exp(xp[l * inner] - mx));
        for (std::size_t l = 0; l < len; ++l) yp[l * inner] /= s;
      }
  }
  finish(tape, y, "softmax");
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), outer, inner, len] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      if (inner == 1) {
        for (std::size_t r = 0; r < outer; ++r) {
          CMapVec<T> yr(ys->value.data() + r * len, ix(len));
          CMapVec<T> dr(ys->grad.data() + r * len, ix(len));
          const T dot = (yr * dr).sum();
          MapVec<T>(gx + r * len, ix(len)) += yr * (dr - dot);
        }
        return;
      }
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
          const std::size_t base = o * len * inner + i;
          T dot = 0;
          for (std::size_t l = 0; l < len; ++l)
            dot += ys->value[base + l * inner] * ys->grad[base + l * inner];
          for (std::size_t l = 0; l < len; ++l) {
            const std::size_t q = base + l * inner;
            gx[q] += ys->value[q] * (ys->grad[q] - dot);
          }
        }
    });
  }
  return y;
}

template <typename T>
Tensor<T> attention_readout(Tape<T>& tape, const Tensor<T>& f, const Tensor<T>& g,
                            const Tensor<T>& h, Tensor<T>* beta_out) {
  require_rank(f.shape(), 3, "attention_readout", "f");
  require_same(f.shape(), g.shape(), "attention_readout");
  require_rank(h.shape(), 3, "attention_readout", "h");
  const std::size_t n = f.dim(0), ck = f.dim(1), p = f.dim(2), cv = h.dim(1);
  if (h.dim(0) != n || h.dim(2) != p) {
    throw ShapeError("attention_readout: h " + shape_string(h.shape()) + " does not match f " +
                     shape_string(f.shape()));
  }
  const bool record = tape.needs_grad({&f, &g, &h});
  // beta is kept for the backward pass only when recording.
  auto kept = record ? std::make_shared<AlignedVector<T>>(n * p * p) : nullptr;
  AlignedVector<T> scratch(record ? 0 : p * p);
  if (beta_out != nullptr) *beta_out = Tensor<T>(Shape{n, p, p});
  Tensor<T> y(Shape{n, cv, p});
  for (std::size_t b = 0; b < n; ++b) {
    T* beta = record ? kept->data() + b * p * p : scratch.data();
    MapMat<T> bm(beta, ix(p), ix(p));
    CMapMat<T> fm(f.data() + b * ck * p, ix(ck), ix(p));
    CMapMat<T> gm(g.data() + b * ck * p, ix(ck), ix(p));
    CMapMat<T> hm(h.data() + b * cv * p, ix(cv), ix(p));
    bm.noalias() = fm.transpose() * gm;
    softmax_rows_inplace(beta, p, p);
    MapMat<T>(y.data() + b * cv * p, ix(cv), ix(p)).noalias() = hm * bm.transpose();
    if (beta_out != nullptr) std::copy_n(beta, p * p, beta_out->data() + b * p * p);
  }
  finish(tape, y, "attention_readout");
  if (record) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), fs = f.storage(), gs = g.storage(), hs = h.storage(), kept, n, ck,
               cv, p] {
      if (ys->grad.empty()) return;
      RowMat<T> dbeta(ix(p), ix(p));
      for (std::size_t b = 0; b < n; ++b) {
        CMapMat<T> bm(kept->data() + b * p * p, ix(p), ix(p));
        CMapMat<T> dy(ys->grad.data() + b * cv * p, ix(cv), ix(p));
        CMapMat<T> hm(hs->value.data() + b * cv * p, ix(cv), ix(p));
        if (wants(hs)) MapMat<T>(grad_of(hs) + b * cv * p, ix(cv), ix(p)).noalias() += dy * bm;
        if (!wants(fs) && !wants(gs)) continue;
        dbeta.noalias() = dy.transpose() * hm;
        // Softmax backward in place: ds = beta * (dbeta - rowsum(beta * dbeta)).
        for (std::size_t r = 0; r < p; ++r) {
          CMapVec<T> br(kept->data() + b * p * p + r * p, ix(p));
          MapVec<T> dr(dbeta.data() + r * p, ix(p));
          const T dot = (br * dr).sum();
          dr = br * (dr - dot);
        }
        CMapMat<T> fm(fs->value.data() + b * ck * p, ix(ck), ix(p));
        CMapMat<T> gm(gs->value.data() + b * ck * p, ix(ck), ix(p));
        if (wants(fs)) MapMat<T>(grad_of(fs) + b * ck * p, ix(ck), ix(p)).noalias() += gm * dbeta.transpose();
        if (wants(gs)) MapMat<T>(grad_of(gs) + b * ck * p, ix(ck), ix(p)).noalias() += fm * dbeta;
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> leaky_relu(Tape<T>& tape, const Tensor<T>& x, T alpha) {
  return unary(
      tape, x, "leaky_relu", [alpha](T v) { return v > T(0) ? v : alpha * v; },
      [alpha](T v, T) { return v > T(0) ? T(1) : alpha; });
}

template <typename T>
Tensor<T> relu(Tape<T>& tape, const Tensor<T>& x) {
  return unary(
      tape, x, "relu", [](T v) { return v > T(0) ? v : T(0); },
      [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Tensor<T> tanh(Tape<T>& tape, const Tensor<T>& x) {
  return unary(
      tape, x, "tanh", [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Tensor<T> abs(Tape<T>& tape, const Tensor<T>& x) {
  return unary(
      tape, x, "abs", [](T v) { return std::abs(v); },
      [](T v, T) { return v > T(0) ? T(1) : (v < T(0) ? T(-1) : T(0)); });
}

template <typename T>
Tensor<T> square(Tape<T>& tape, const Tensor<T>& x) {
  return unary(
      tape, x, "square", [](T v) { return v * v; }, [](T v, T) { return T(2) * v; });
}

template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& x, T factor) {
  return unary(
      tape, x, "scale", [factor](T v) { return v * factor; }, [factor](T, T) { return factor; });
}

template <typename T>
Tensor<T> add_scalar(Tape<T>& tape, const Tensor<T>& x, T c) {
  return unary(
      tape, x, "add_scalar", [c](T v) { return v + c; }, [](T, T) { return T(1); });
}

namespace {

enum class BinOp { kAdd, kSub, kMul };

template <typename T>
Tensor<T> binary(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b, BinOp op,
                 const char* name) {
  const bool bcast = b.size() == 1 && a.size() != 1;
  if (!bcast) require_same(a.shape(), b.shape(), name);
  Tensor<T> y(a.shape());
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const T av = a.data()[i];
    const T bv = b.data()[bcast ? 0 : i];
    y.data()[i] = op == BinOp::kAdd ? av + bv : (op == BinOp::kSub ? av - bv : av * bv);
  }
  finish(tape, y, name);
  if (tape.needs_grad({&a, &b})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), as = a.storage(), bs = b.storage(), op, bcast, n] {
      if (ys->grad.empty()) return;
      const T* dy = ys->grad.data();
      if (wants(as)) {
        T* da = grad_of(as);
        for (std::size_t i = 0; i < n; ++i)
          da[i] += op == BinOp::kMul ? dy[i] * bs->value[bcast ? 0 : i] : dy[i];
      }
      if (wants(bs)) {
        T* db = grad_of(bs);
        for (std::size_t i = 0; i < n; ++i) {
          const T g = op == BinOp::kMul ? dy[i] * as->value[i] : (op == BinOp::kSub ? -dy[i] : dy[i]);
          db[bcast ? 0 : i] += g;
        }
      }
    });
  }
  return y;
}

}  // namespace

template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  return binary(tape, a, b, BinOp::kAdd, "add");
}

template <typename T>
Tensor<T> sub(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  return binary(tape, a, b, BinOp::kSub, "sub");
}

template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  return binary(tape, a, b, BinOp::kMul, "mul");
}

template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& x) {
  Tensor<T> y = Tensor<T>::scalar(CMapVec<T>(x.data(), ix(x.size())).sum());
  finish(tape, y, "sum");
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage()] {
      if (ys->grad.empty()) return;
      MapVec<T>(grad_of(xs), ix(xs->value.size())) += ys->grad[0];
    });
  }
  return y;
}

template <typename T>
Tensor<T> mean(Tape<T>& tape, const Tensor<T>& x) {
  if (x.size() == 0) throw InvalidArgument("mean: empty tensor");
  return scale(tape, sum(tape, x), T(1) / static_cast<T>(x.size()));
}

template <typename T>
Tensor<T> sum_rows(Tape<T>& tape, const Tensor<T>& x) {
  return row_reduce(
      tape, x, "sum_rows", [](const T* p, std::size_t d) { return CMapVec<T>(p, ix(d)).sum(); },
      [](T, T) { return T(1); });
}

template <typename T>
Tensor<T> l1_rows(Tape<T>& tape, const Tensor<T>& x) {
  return row_reduce(
      tape, x, "l1_rows", [](const T* p, std::size_t d) { return CMapVec<T>(p, ix(d)).abs().sum(); },
      [](T v, T) { return v > T(0) ? T(1) : (v < T(0) ? T(-1) : T(0)); });
}

template <typename T>
Tensor<T> l2sq_rows(Tape<T>& tape, const Tensor<T>& x) {
  return row_reduce(
      tape, x, "l2sq_rows",
      [](const T* p, std::size_t d) { return CMapVec<T>(p, ix(d)).square().sum(); },
      [](T v, T) { return T(2) * v; });
}

template <typename T>
Tensor<T> norm_rows(Tape<T>& tape, const Tensor<T>& x) {
  return row_reduce(
      tape, x, "norm_rows",
      [](const T* p, std::size_t d) { return std::sqrt(CMapVec<T>(p, ix(d)).square().sum()); },
      [](T v, T out) { return out > T(0) ? v / out : T(0); });
}

template <typename T>
Tensor<T> cosine_similarity_rows(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b, T eps,
                                 std::vector<bool>* degenerate) {
  require_rank(a.shape(), 2, "cosine_similarity_rows", "a");
  require_same(a.shape(), b.shape(), "cosine_similarity_rows");
  const std::size_t n = a.dim(0), d = a.dim(1);
  Tensor<T> y(Shape{n});
  AlignedVector<T> na(n), nb(n);
  std::vector<bool> flat(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    CMapVec<T> ar(a.data() + r * d, ix(d)), br(b.data() + r * d, ix(d));
    na[r] = std::sqrt(ar.square().sum());
    nb[r] = std::sqrt(br.square().sum());
    if (na[r] < eps || nb[r] < eps) {
      flat[r] = true;
      continue;
    }
    y.data()[r] = (ar * br).sum() / (na[r] * nb[r]);
  }
  if (degenerate != nullptr) *degenerate = flat;
  finish(tape, y, "cosine_similarity_rows");
  if (tape.needs_grad({&a, &b})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), as = a.storage(), bs = b.storage(), na, nb, flat, n, d] {
      if (ys->grad.empty()) return;
      T* ga = wants(as) ? grad_of(as) : nullptr;
      T* gb = wants(bs) ? grad_of(bs) : nullptr;
      for (std::size_t r = 0; r < n; ++r) {
        if (flat[r]) continue;
        const T g = ys->grad[r];
        const T c = ys->value[r];
        CMapVec<T> ar(as->value.data() + r * d, ix(d)), br(bs->value.data() + r * d, ix(d));
        const T inv = T(1) / (na[r] * nb[r]);
        if (ga != nullptr)
          MapVec<T>(ga + r * d, ix(d)) += g * (br * inv - ar * (c / (na[r] * na[r])));
        if (gb != nullptr)
          MapVec<T>(gb + r * d, ix(d)) += g * (ar * inv - br * (c / (nb[r] * nb[r])));
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> gather_rows(Tape<T>& tape, const Tensor<T>& x, std::span<const std::size_t> rows) {
  if (x.rank() < 1) throw ShapeError("gather_rows: rank must be >= 1");
  const std::size_t n = x.dim(0);
  const std::size_t d = n == 0 ? 0 : x.size() / n;
  Shape s = x.shape();
  s[0] = rows.size();
  Tensor<T> y(s);
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= n) throw InvalidArgument("gather_rows: row index out of range");
    std::copy_n(x.data() + idx[k] * d, d, y.data() + k * d);
  }
  if (tape.needs_grad({&x})) {
    y.set_requires_grad(true);
    tape.push([ys = y.storage(), xs = x.storage(), idx, d] {
      if (ys->grad.empty()) return;
      T* gx = grad_of(xs);
      for (std::size_t k = 0; k < idx.size(); ++k)
        MapVec<T>(gx + idx[k] * d, ix(d)) += CMapVec<T>(ys->grad.data() + k * d, ix(d));
    });
  }
  return y;
}

template <typename T>
Tensor<T> divide_by_bilinear(Tape<T>& tape, const Tensor<T>& weight, std::span<const T> u,
                             std::span<const T> v) {
  const std::size_t rows = weight.rank() == 0 ? 0 : weight.dim(0);
  const std::size_t rest = rows == 0 ? 0 : weight.size() / rows;
  if (u.size() != rows || v.size() != rest) {
    throw ShapeError("divide_by_bilinear: u/v sizes do not match weight " +
                     shape_string(weight.shape()));
  }
  CMapMat<T> wm(weight.data(), ix(rows), ix(rest));
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> um(u.data(), ix(rows));
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> vm(v.data(), ix(rest));
  const T s = um.dot(wm * vm);
  if (s == T(0)) throw NonFiniteError("divide_by_bilinear: zero bilinear form");
  Tensor<T> y(weight.shape());
  MapMat<T>(y.data(), ix(rows), ix(rest)) = wm / s;
  finish(tape, y, "divide_by_bilinear");
  if (tape.needs_grad({&weight})) {
    y.set_requires_grad(true);
    AlignedVector<T> uc(u.begin(), u.end()), vc(v.begin(), v.end());
    tape.push([ys = y.storage(), ws = weight.storage(), uc, vc, s, rows, rest] {
      if (ys->grad.empty()) return;
      CMapMat<T> g(ys->grad.data(), ix(rows), ix(rest));
      CMapMat<T> w(ws->value.data(), ix(rows), ix(rest));
      const T inner = g.cwiseProduct(w).sum();
      Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> um(uc.data(), ix(rows));
      Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> vm(vc.data(), ix(rest));
      MapMat<T>(grad_of(ws), ix(rows), ix(rest)) += g / s - (inner / (s * s)) * (um * vm);
    });
  }
  return y;
}

#define W2SC_INSTANTIATE_OPS(T)                                                                  \
  template Tensor<T> conv2d(Tape<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,      \
                            Stride2, Padding);                                                   \
  template Tensor<T> conv2d_transpose(Tape<T>&, const Tensor<T>&, const Tensor<T>&,              \
                                      const Tensor<T>&, Stride2, Padding);                       \
  template Tensor<T> pad2d(Tape<T>&, const Tensor<T>&, Pad2);                                    \
  template Tensor<T> concat_channels(Tape<T>&, std::span<const Tensor<T>>);                      \
  template Tensor<T> reshape(Tape<T>&, const Tensor<T>&, Shape);                                 \
  template Tensor<T> transpose_last2(Tape<T>&, const Tensor<T>&);                                \
  template Tensor<T> matmul(Tape<T>&, const Tensor<T>&, const Tensor<T>&, bool, bool);           \
  template Tensor<T> linear(Tape<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);     \
  template Tensor<T> softmax(Tape<T>&, const Tensor<T>&, int);                                   \
  template Tensor<T> attention_readout(Tape<T>&, const Tensor<T>&, const Tensor<T>&,             \
                                       const Tensor<T>&, Tensor<T>*);                            \
  template Tensor<T> leaky_relu(Tape<T>&, const Tensor<T>&, T);                                  \
  template Tensor<T> relu(Tape<T>&, const Tensor<T>&);                                           \
  template Tensor<T> tanh(Tape<T>&, const Tensor<T>&);                                           \
  template Tensor<T> abs(Tape<T>&, const Tensor<T>&);                                            \
  template Tensor<T> square(Tape<T>&, const Tensor<T>&);                                         \
  template Tensor<T> add(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> sub(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> mul(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> scale(Tape<T>&, const Tensor<T>&, T);                                       \
  template Tensor<T> add_scalar(Tape<T>&, const Tensor<T>&, T);                                  \
  template Tensor<T> sum(Tape<T>&, const Tensor<T>&);                                            \
  template Tensor<T> mean(Tape<T>&, const Tensor<T>&);                                           \
  template Tensor<T> sum_rows(Tape<T>&, const Tensor<T>&);                                       \
  template Tensor<T> l1_rows(Tape<T>&, const Tensor<T>&);                                        \
  template Tensor<T> l2sq_rows(Tape<T>&, const Tensor<T>&);                                      \
  template Tensor<T> norm_rows(Tape<T>&, const Tensor<T>&);                                      \
  template Tensor<T> cosine_similarity_rows(Tape<T>&, const Tensor<T>&, const Tensor<T>&, T,     \
                                            std::vector<bool>*);                                 \
  template Tensor<T> gather_rows(Tape<T>&, const Tensor<T>&, std::span<const std::size_t>);      \
  template Tensor<T> divide_by_bilinear(Tape<T>&, const Tensor<T>&, std::span<const T>,          \
                                        std::span<const T>);

W2SC_INSTANTIATE_OPS(float)
W2SC_INSTANTIATE_OPS(double)

#undef W2SC_INSTANTIATE_OPS

}  // namespace w2sc::ad
