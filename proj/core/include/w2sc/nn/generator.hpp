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

#include <random>

#include "w2sc/nn/attention.hpp"
#include "w2sc/nn/layers.hpp"
#include "w2sc/nn/shape_trace.hpp"

namespace w2sc::nn {

inline constexpr std::size_t kSegmentBands = 128;
inline constexpr std::size_t kSegmentFrames = 12;

struct GeneratorTrace {
  ShapeTrace layers;     // encoder-decoder rows
  ShapeTrace attention;  // attention module rows, starting with its input conv
};

/// Encoder-decoder generator on [N, 1, 128, 12] segments with skip
/// connections and self-attention after the first convolution.
template <typename T>
class Generator {
 public:
  Generator();

  /// Input values are expected in [-1, 1]; output is tanh-bounded.
  /// \p use_attention = false skips the attention block entirely.
  Tensor<T> forward(Tape<T>& tape, const Tensor<T>& x, GeneratorTrace* trace = nullptr,
                    bool use_attention = true) const;

  TensorList<T> parameters() const;
  void init(std::mt19937_64& rng, double stddev = 0.02);

  Conv2d<T> conv1;
  SelfAttention<T> attention;
  Conv2d<T> down1;
  Conv2d<T> down2;
  Conv2d<T> down3;
  ConvTranspose2d<T> up1;
  ConvTranspose2d<T> up2;
  ConvTranspose2d<T> up3;
};

extern template class Generator<float>;
extern template class Generator<double>;

}  // namespace w2sc::nn
