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
#include "w2sc/tensor/adam.hpp"

#include <cmath>
#include <utility>

namespace w2sc::ad {

template <typename T>
Adam<T>::Adam(TensorList<T> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    m_.emplace_back(p.tensor.shape());
    v_.emplace_back(p.tensor.shape());
  }
}

template <typename T>
void Adam<T>::step() {
  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const T step_size = static_cast<T>(options_.lr / c1);
  const T root_c2 = static_cast<T>(std::sqrt(c2));
  const T eps = static_cast<T>(options_.eps);
  const T tb1 = static_cast<T>(b1), tb2 = static_cast<T>(b2);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor<T> p = params_[i].tensor;
    if (!p.has_grad()) continue;
    std::span<const T> g = std::as_const(p).grad();
    T* w = p.data();
    T* m = m_[i].data();
    T* v = v_[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = tb1 * m[k] + (T(1) - tb1) * g[k];
      v[k] = tb2 * v[k] + (T(1) - tb2) * g[k] * g[k];
      w[k] -= step_size * m[k] / (std::sqrt(v[k]) / root_c2 + eps);
    }
  }
}

template <typename T>
TensorList<T> Adam<T>::state() const {
  TensorList<T> out;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    out.push_back({params_[i].name + ".m", m_[i]});
    out.push_back({params_[i].name + ".v", v_[i]});
  }
  return out;
}

template class Adam<float>;
template class Adam<double>;

}  // namespace w2sc::ad
