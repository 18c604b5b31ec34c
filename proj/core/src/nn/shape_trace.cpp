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
#include "w2sc/nn/shape_trace.hpp"

#include "w2sc/error.hpp"

namespace w2sc::nn {

std::string feature_map_string(const ad::Shape& nchw) {
  if (nchw.size() != 4) throw ShapeError("feature_map_string: expected NCHW, got " + ad::shape_string(nchw));
  return "(" + std::to_string(nchw[2]) + "×" + std::to_string(nchw[3]) + ")×" +
         std::to_string(nchw[1]);
}

std::string matrix_string(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "×" + std::to_string(cols);
}

std::string kernel_string(std::size_t kh, std::size_t kw) { return matrix_string(kh, kw); }

}  // namespace w2sc::nn
