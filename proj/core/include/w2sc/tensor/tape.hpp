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

#include <functional>
#include <initializer_list>
#include <vector>

#include "w2sc/tensor/tensor.hpp"

namespace w2sc::ad {

/// Ordered record of differentiable operations.
///
/// Every op appends a backward closure when recording is enabled and at least
/// one input requires a gradient. backward() replays the closures in reverse
/// (a valid topological order because ops are recorded as they execute), so
/// each node is visited exactly once. A tape can be consumed once; reset()
/// clears it for reuse.
///
/// A tape and the tensors it references belong to one thread at a time.
template <typename T>
class Tape {
 public:
  enum class Mode { kRecord, kNoGrad };

  explicit Tape(Mode mode = Mode::kRecord) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::kRecord; }
  /// Whether an op with these inputs must record a backward closure.
  bool needs_grad(std::initializer_list<const Tensor<T>*> inputs) const;

  /// When set (default) every op output is scanned for NaN/Inf and a
  /// NonFiniteError naming the op is thrown.
  bool check_finite() const { return check_finite_; }
  void set_check_finite(bool on) { check_finite_ = on; }

  void push(std::function<void()> backward_fn);

  /// Seeds d(loss)/d(loss) = 1 and runs every recorded closure in reverse.
  /// Throws InvalidArgument for a non-scalar loss and TapeError when called
  /// again without reset().
  void backward(const Tensor<T>& loss);

  void reset();
  std::size_t size() const { return nodes_.size(); }

 private:
  Mode mode_;
  bool check_finite_ = true;
  bool consumed_ = false;
  std::vector<std::function<void()>> nodes_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace w2sc::ad
