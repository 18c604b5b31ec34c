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

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "w2sc/tensor/tensor.hpp"

namespace w2sc::ad {

/// A tensor handle with a checkpoint name. Copies share storage.
template <typename T>
struct NamedTensor {
  std::string name;
  Tensor<T> tensor;
};

template <typename T>
using TensorList = std::vector<NamedTensor<T>>;

/// Prefixes every name with "\p prefix." and appends to \p out.
template <typename T>
void append_prefixed(TensorList<T>& out, const std::string& prefix, const TensorList<T>& in) {
  for (const auto& p : in) out.push_back({prefix + "." + p.name, p.tensor});
}

/// Zero-mean normal weights with the given standard deviation; tensors of
/// rank 1 (biases) are zeroed.
template <typename T>
void init_normal(const TensorList<T>& params, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (const auto& p : params) {
    Tensor<T> t = p.tensor;
    if (t.rank() <= 1) {
      std::fill(t.values().begin(), t.values().end(), T(0));
    } else {
      for (T& v : t.values()) v = static_cast<T>(dist(rng));
    }
  }
}

template <typename T>
void zero_grads(const TensorList<T>& params) {
  for (const auto& p : params) {
    Tensor<T> t = p.tensor;
    t.zero_grad();
  }
}

template <typename T>
void set_requires_grad(const TensorList<T>& params, bool on) {
  for (const auto& p : params) {
    Tensor<T> t = p.tensor;
    t.set_requires_grad(on);
  }
}

}  // namespace w2sc::ad
