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

#include <array>
#include <random>

#include "w2sc/nn/layers.hpp"

namespace w2sc::nn {

/// Three 3×3 stride-2 convolutions and a fully connected projection to a
/// 128-dimensional embedding.
template <typename T>
class Siamese {
 public:
  static constexpr std::size_t kEmbedding = 128;

  Siamese();

  /// x: [N, 1, 128, 12] -> [N, 128].
  Tensor<T> forward(Tape<T>& tape, const Tensor<T>& x) const;

  TensorList<T> parameters() const;
  void init(std::mt19937_64& rng, double stddev = 0.02);

  std::array<Conv2d<T>, 3> convs;
  Linear<T> fc;
};

extern template class Siamese<float>;
extern template class Siamese<double>;

}  // namespace w2sc::nn
