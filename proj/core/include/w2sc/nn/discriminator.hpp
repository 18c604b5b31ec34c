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
#include "w2sc/tensor/spectral_norm.hpp"

namespace w2sc::nn {

/// Four spectrally normalized 3×3 stride-2 convolutions followed by a fully
/// connected layer producing one unbounded score per segment.
template <typename T>
class Discriminator {
 public:
  static constexpr std::size_t kLayers = 4;

  Discriminator();

  /// x: [N, 1, 128, 12] -> [N]. Uses the current spectral-norm estimates.
  Tensor<T> forward(Tape<T>& tape, const Tensor<T>& x) const;

  /// One or more power iterations on every convolution weight.
  void refresh_spectral_norm(int iterations = 1);

  TensorList<T> parameters() const;
  /// Spectral-norm vectors ("convK.u", "convK.v").
  TensorList<T> buffers() const;
  void init(std::mt19937_64& rng, double stddev = 0.02);

  std::array<Conv2d<T>, kLayers> convs;
  std::array<ad::SpectralNorm<T>, kLayers> norms;
  Linear<T> fc;
};

extern template class Discriminator<float>;
extern template class Discriminator<double>;

}  // namespace w2sc::nn
