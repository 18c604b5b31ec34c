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
#include "w2sc/tensor/tape.hpp"

#include <utility>

#include "w2sc/error.hpp"

namespace w2sc::ad {

template <typename T>
bool Tape<T>::needs_grad(std::initializer_list<const Tensor<T>*> inputs) const {
  if (!recording()) return false;
  for (const Tensor<T>* t : inputs) {
    if (t != nullptr && t->defined() && t->requires_grad()) return true;
  }
  return false;
}

template <typename T>
void Tape<T>::push(std::function<void()> backward_fn) {
  if (consumed_) throw TapeError("tape already consumed by backward(); call reset()");
  nodes_.push_back(std::move(backward_fn));
}

template <typename T>
void Tape<T>::backward(const Tensor<T>& loss) {
  if (consumed_) throw TapeError("backward() called twice without reset()");
  if (!loss.defined() || loss.size() != 1) {
    throw InvalidArgument("backward: loss must be a scalar tensor");
  }
  consumed_ = true;
  if (!loss.requires_grad()) return;
  auto& storage = *loss.storage();
  storage.ensure_grad();
  storage.grad[0] += T(1);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
  nodes_.clear();
}

template <typename T>
void Tape<T>::reset() {
  nodes_.clear();
  consumed_ = false;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace w2sc::ad
