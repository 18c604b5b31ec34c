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
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace w2sc::ad {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Allocator with 64-byte alignment. Vectorized reductions peel an unaligned
/// head, so a buffer's summation order would otherwise depend on where the
/// heap placed it and repeated runs would differ in the last bits.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlign)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Storage shared by every handle to the same tensor.
template <typename T>
struct TensorStorage {
  Shape shape;
  AlignedVector<T> value;
  AlignedVector<T> grad;  // empty until a gradient is accumulated
  bool requires_grad = false;

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
  }
};

/// Dense row-major n-dimensional array with an optional gradient.
///
/// Tensor is a cheap handle: copies alias the same storage, as autodiff
/// needs. Use clone() for an independent deep copy.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  /// Zero-filled tensor.
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<T> values, bool requires_grad = false);

  static Tensor scalar(T v, bool requires_grad = false) { return Tensor({1}, {v}, requires_grad); }

  bool defined() const { return storage_ != nullptr; }
  const Shape& shape() const { return storage_->shape; }
  std::size_t rank() const { return storage_->shape.size(); }
  std::size_t dim(std::size_t i) const { return storage_->shape.at(i); }
  std::size_t size() const { return storage_->value.size(); }

  std::span<T> values() { return storage_->value; }
  std::span<const T> values() const { return storage_->value; }
  T* data() { return storage_->value.data(); }
  const T* data() const { return storage_->value.data(); }
  T item() const;

  bool requires_grad() const { return storage_ && storage_->requires_grad; }
  void set_requires_grad(bool on) { storage_->requires_grad = on; }
  bool has_grad() const { return storage_->grad.size() == storage_->value.size(); }
  /// Gradient view; allocates a zero gradient on first access.
  std::span<T> grad();
  std::span<const T> grad() const { return storage_->grad; }
  void zero_grad();

  /// Deep copy of values (and shape) without gradient or requires_grad.
  Tensor clone() const;
  /// Same as clone(); named for use where a value leaves the graph.
  Tensor detach() const { return clone(); }

  const std::shared_ptr<TensorStorage<T>>& storage() const { return storage_; }
  bool same_storage(const Tensor& other) const { return storage_ == other.storage_; }

 private:
  std::shared_ptr<TensorStorage<T>> storage_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;

/// Copies values between precisions (gradient not copied).
template <typename To, typename From>
Tensor<To> cast(const Tensor<From>& t, bool requires_grad = false) {
  std::vector<To> v(t.values().begin(), t.values().end());
  return Tensor<To>(t.shape(), std::move(v), requires_grad);
}

}  // namespace w2sc::ad
