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
#include "w2sc/tensor/tensor.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "w2sc/error.hpp"

namespace w2sc::ad {

std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? ", " : "") << shape[i];
  os << ']';
  return os.str();
}

template <typename T>
Tensor<T>::Tensor(Shape shape, bool requires_grad)
    : storage_(std::make_shared<TensorStorage<T>>()) {
  storage_->value.assign(numel(shape), T(0));
  storage_->shape = std::move(shape);
  storage_->requires_grad = requires_grad;
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values, bool requires_grad)
    : storage_(std::make_shared<TensorStorage<T>>()) {
  if (values.size() != numel(shape)) {
    throw ShapeError("tensor: " + std::to_string(values.size()) + " values for shape " +
                     shape_string(shape));
  }
  storage_->shape = std::move(shape);
  storage_->value.assign(values.begin(), values.end());
  storage_->requires_grad = requires_grad;
}

template <typename T>
T Tensor<T>::item() const {
  if (size() != 1) throw ShapeError("item() on tensor of shape " + shape_string(shape()));
  return storage_->value[0];
}

template <typename T>
std::span<T> Tensor<T>::grad() {
  storage_->ensure_grad();
  return storage_->grad;
}

template <typename T>
void Tensor<T>::zero_grad() {
  if (storage_) storage_->grad.assign(storage_->value.size(), T(0));
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  Tensor out;
  out.storage_ = std::make_shared<TensorStorage<T>>();
  out.storage_->shape = storage_->shape;
  out.storage_->value = storage_->value;
  return out;
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace w2sc::ad
