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

#include "w2sc/tensor/ops.hpp"
#include "w2sc/tensor/parameter.hpp"

namespace w2sc::ad {

/// Power-iteration estimate of the top singular value of a weight viewed as
/// [out_channels, rest]. The singular vector estimates u and v persist
/// between calls and are part of the checkpointed state.
template <typename T>
class SpectralNorm {
 public:
  SpectralNorm() = default;
  /// Random unit-norm u and v.
  SpectralNorm(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

  /// v <- normalize(W^T u), u <- normalize(W v), repeated \p iterations times.
  void power_iteration(const Tensor<T>& weight, int iterations = 1);

  /// u^T W v for the current estimates.
  T sigma(const Tensor<T>& weight) const;

  /// weight / sigma with gradients through the division (u, v constant).
  /// A non-positive estimate returns \p weight itself and sets
  /// \p degenerate.
  Tensor<T> normalize(Tape<T>& tape, const Tensor<T>& weight, bool* degenerate = nullptr) const;

  Tensor<T>& u() { return u_; }
  Tensor<T>& v() { return v_; }
  const Tensor<T>& u() const { return u_; }
  const Tensor<T>& v() const { return v_; }

 private:
  Tensor<T> u_;
  Tensor<T> v_;
};

extern template class SpectralNorm<float>;
extern template class SpectralNorm<double>;

}  // namespace w2sc::ad
