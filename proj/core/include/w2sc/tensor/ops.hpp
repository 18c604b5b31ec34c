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
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "w2sc/tensor/tape.hpp"
#include "w2sc/tensor/tensor.hpp"

/// Differentiable operations. Every function records its backward rule on
/// the given tape when the tape records and an input requires a gradient.
namespace w2sc::ad {

enum class Padding { kValid, kSame };

struct Stride2 {
  std::size_t h = 1;
  std::size_t w = 1;
};

struct Pad2 {
  std::size_t top = 0;
  std::size_t bottom = 0;
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Output extent of a convolution along one axis. valid: floor((in - k)/s) + 1;
/// same: ceil(in / s).
std::size_t conv_output_size(std::size_t in, std::size_t kernel, std::size_t stride, Padding p);
/// Leading/trailing zero padding along one axis for "same" convolution; the
/// extra zero goes on the trailing side.
std::pair<std::size_t, std::size_t> same_padding(std::size_t in, std::size_t out,
                                                 std::size_t kernel, std::size_t stride);

/// x: [N, C, H, W], weight: [Co, C, kh, kw], bias: [Co] or undefined.
template <typename T>
Tensor<T> conv2d(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                 const Tensor<T>& bias, Stride2 stride, Padding padding);

/// Adjoint of conv2d. x: [N, Ci, H, W], weight: [Ci, Co, kh, kw], bias: [Co].
/// Output extent: same: in * s; valid: (in - 1) * s + k.
template <typename T>
Tensor<T> conv2d_transpose(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                           const Tensor<T>& bias, Stride2 stride, Padding padding);

/// Zero padding of the two spatial axes of an NCHW tensor.
template <typename T>
Tensor<T> pad2d(Tape<T>& tape, const Tensor<T>& x, Pad2 pad);

/// Concatenation along axis 1 (channels); all other extents must match.
template <typename T>
Tensor<T> concat_channels(Tape<T>& tape, std::span<const Tensor<T>> parts);

template <typename T>
Tensor<T> reshape(Tape<T>& tape, const Tensor<T>& x, Shape shape);

/// Swaps the last two axes (rank >= 2).
template <typename T>
Tensor<T> transpose_last2(Tape<T>& tape, const Tensor<T>& x);

/// Matrix product of rank-2 operands or batched product of rank-3 operands
/// with equal batch extent. Transposition applies to the last two axes.
template <typename T>
Tensor<T> matmul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b, bool trans_a = false,
                 bool trans_b = false);

/// x: [N, in], weight: [out, in], bias: [out] or undefined -> [N, out].
template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& weight,
                 const Tensor<T>& bias);

/// Numerically shifted softmax along \p axis (negative counts from the end).
template <typename T>
Tensor<T> softmax(Tape<T>& tape, const Tensor<T>& x, int axis = -1);

/// Fused attention read-out. f, g: [N, Ck, P]; h: [N, Cv, P]. With
/// beta = softmax(f^T g) along the key axis, returns [N, Cv, P] where
/// out[c, i] = sum_j beta[i, j] h[c, j]. Equivalent to the composition of
/// matmul, softmax and matmul but keeps one [P, P] map per sample instead
/// of four batch-wide ones. \p beta_out, when given, receives [N, P, P].
template <typename T>
Tensor<T> attention_readout(Tape<T>& tape, const Tensor<T>& f, const Tensor<T>& g,
                            const Tensor<T>& h, Tensor<T>* beta_out = nullptr);

template <typename T>
Tensor<T> leaky_relu(Tape<T>& tape, const Tensor<T>& x, T alpha);
template <typename T>
Tensor<T> relu(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> tanh(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> abs(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> square(Tape<T>& tape, const Tensor<T>& x);

/// Elementwise; \p b may also be a one-element tensor broadcast over \p a.
template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> sub(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& x, T factor);
template <typename T>
Tensor<T> add_scalar(Tape<T>& tape, const Tensor<T>& x, T c);

/// Reductions to a one-element tensor.
template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> mean(Tape<T>& tape, const Tensor<T>& x);

/// Per-row reductions over every axis but the first: [N, ...] -> [N].
template <typename T>
Tensor<T> sum_rows(Tape<T>& tape, const Tensor<T>& x);
/// Sum of absolute values per row (L1 norm).
template <typename T>
Tensor<T> l1_rows(Tape<T>& tape, const Tensor<T>& x);
/// Sum of squares per row (squared L2 norm).
template <typename T>
Tensor<T> l2sq_rows(Tape<T>& tape, const Tensor<T>& x);
/// Euclidean norm per row. The gradient at a zero row is taken as zero.
template <typename T>
Tensor<T> norm_rows(Tape<T>& tape, const Tensor<T>& x);

/// Row-wise cosine similarity of [N, D] operands -> [N]. Rows where either
/// norm is below \p eps yield 0 with zero gradient and are flagged in
/// \p degenerate (when given).
template <typename T>
Tensor<T> cosine_similarity_rows(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b, T eps,
                                 std::vector<bool>* degenerate = nullptr);

/// Selects rows along the first axis: [N, ...] -> [K, ...].
template <typename T>
Tensor<T> gather_rows(Tape<T>& tape, const Tensor<T>& x, std::span<const std::size_t> rows);

/// Weight divided by the bilinear form u^T W v with u, v held constant.
/// Weight is viewed as [rows, rest]; u has rows entries, v has rest entries.
/// Gradient: G/s - <G, W>/s^2 * u v^T.
template <typename T>
Tensor<T> divide_by_bilinear(Tape<T>& tape, const Tensor<T>& weight, std::span<const T> u,
                             std::span<const T> v);

}  // namespace w2sc::ad
