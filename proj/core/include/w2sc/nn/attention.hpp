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

#include "w2sc/nn/layers.hpp"
#include "w2sc/nn/shape_trace.hpp"

namespace w2sc::nn {

/// Self-attention over all 128×12 positions of a 64-channel feature map:
/// f = W_f x, g = W_g x, beta = softmax(f^T g) over keys, h = W_h x,
/// o = W_o(reshape(beta h^T)), output x + gamma * o.
template <typename T>
class SelfAttention {
 public:
  static constexpr std::size_t kChannels = 64;
  static constexpr std::size_t kKeyChannels = 16;
  static constexpr std::size_t kValueChannels = 128;

  SelfAttention();

  /// x: [N, 64, H, W]. When given, \p beta receives the [N, HW, HW]
  /// attention map.
  Tensor<T> forward(Tape<T>& tape, const Tensor<T>& x, ShapeTrace* trace = nullptr,
                    Tensor<T>* beta = nullptr) const;

  TensorList<T> parameters() const;

  Conv2d<T> f;
  Conv2d<T> g;
  Conv2d<T> h;
  Conv2d<T> o;
  Tensor<T> gamma;
};

extern template class SelfAttention<float>;
extern template class SelfAttention<double>;

}  // namespace w2sc::nn
