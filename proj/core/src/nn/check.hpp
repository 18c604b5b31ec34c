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

#include <string>

#include "w2sc/error.hpp"
#include "w2sc/tensor/tensor.hpp"

namespace w2sc::nn::detail {

/// Requires an [N, channels, bands, frames] input with N >= 1.
inline void require_nchw(const ad::Shape& s, std::size_t channels, std::size_t bands,
                         std::size_t frames, const std::string& who) {
  if (s.size() != 4 || s[0] == 0 || s[1] != channels || s[2] != bands || s[3] != frames) {
    throw ShapeError(who + ": expected [N, " + std::to_string(channels) + ", " +
                     std::to_string(bands) + ", " + std::to_string(frames) + "], got " +
                     ad::shape_string(s));
  }
}

/// Runs \p fn and prefixes any ShapeError with the stage name.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const ShapeError& e) {
    throw ShapeError(name + ": " + e.what());
  }
}

}  // namespace w2sc::nn::detail
