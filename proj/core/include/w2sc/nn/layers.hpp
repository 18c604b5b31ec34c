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

#include "w2sc/tensor/ops.hpp"
#include "w2sc/tensor/parameter.hpp"

namespace w2sc::nn {

using ad::Padding;
using ad::Stride2;
using ad::Tape;
using ad::Tensor;
using ad::TensorList;

/// Negative slope of every hidden activation.
inline constexpr double kLeakySlope = 0.2;

template <typename T>
Tensor<T> lrelu(Tape<T>& tape, const Tensor<T>& x) {
  return ad::leaky_relu(tape, x, static_cast<T>(kLeakySlope));
}

/// weight: [out, in, kh, kw], bias: [out].
template <typename T>
struct Conv2d {
  Tensor<T> weight;
  Tensor<T> bias;
  Stride2 stride;
  Padding padding = Padding::kValid;

  Conv2d() = default;
  Conv2d(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw, Stride2 s = {},
         Padding p = Padding::kValid)
      : weight({out, in, kh, kw}, true), bias({out}, true), stride(s), padding(p) {}

  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const {
    return ad::conv2d(tape, x, weight, bias, stride, padding);
  }
  TensorList<T> parameters() const { return {{"weight", weight}, {"bias", bias}}; }
};

/// weight: [in, out, kh, kw], bias: [out].
template <typename T>
struct ConvTranspose2d {
  Tensor<T> weight;
  Tensor<T> bias;
  Stride2 stride;
  Padding padding = Padding::kValid;

  ConvTranspose2d() = default;
  ConvTranspose2d(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw, Stride2 s = {},
                  Padding p = Padding::kValid)
      : weight({in, out, kh, kw}, true), bias({out}, true), stride(s), padding(p) {}

  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const {
    return ad::conv2d_transpose(tape, x, weight, bias, stride, padding);
  }
  TensorList<T> parameters() const { return {{"weight", weight}, {"bias", bias}}; }
};

/// weight: [out, in], bias: [out].
template <typename T>
struct Linear {
  Tensor<T> weight;
  Tensor<T> bias;

  Linear() = default;
  Linear(std::size_t in, std::size_t out) : weight({out, in}, true), bias({out}, true) {}

  Tensor<T> operator()(Tape<T>& tape, const Tensor<T>& x) const {
    return ad::linear(tape, x, weight, bias);
  }
  TensorList<T> parameters() const { return {{"weight", weight}, {"bias", bias}}; }
};

}  // namespace w2sc::nn
