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
#include <string>
#include <vector>

#include "w2sc/tensor/tensor.hpp"

namespace w2sc::nn {

/// One layer of a shape-traced forward pass, written per segment (batch
/// axis dropped) in the "(H×W)×C" notation.
struct ShapeTraceRow {
  std::string layer;
  std::string kernel;  // "3×3", or empty for parameter-free layers
  std::vector<std::string> inputs;
  std::string output;
};

using ShapeTrace = std::vector<ShapeTraceRow>;

/// "(H×W)×C" for an [N, C, H, W] shape.
std::string feature_map_string(const ad::Shape& nchw);
/// "R×C".
std::string matrix_string(std::size_t rows, std::size_t cols);
std::string kernel_string(std::size_t kh, std::size_t kw);

}  // namespace w2sc::nn
