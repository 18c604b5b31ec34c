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
#include <utility>
#include <vector>

#include "w2sc/signal/mel.hpp"

namespace w2sc::eval {

/// Row-major rows x cols matrix of frame features.
struct FeatureMatrix {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  const double* row(std::size_t i) const { return data.data() + i * cols; }
};

FeatureMatrix features_from_mel(const signal::MelSpectrogram& m);

/// Monotonic index pairs from (0, 0) to (rows_x - 1, rows_y - 1) with steps
/// (1, 0), (0, 1) or (1, 1).
struct AlignmentPath {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
};

struct DtwResult {
  AlignmentPath path;
  double cost = 0.0;  // sum of frame distances along the path
};

/// Euclidean distance between frame i of x and frame j of y.
double frame_distance(const FeatureMatrix& x, std::size_t i, const FeatureMatrix& y,
                      std::size_t j);

/// Minimal-cost alignment under the three-step recursion. Ties prefer the
/// diagonal step. Throws InvalidArgument on empty input or a width mismatch.
DtwResult dtw_align(const FeatureMatrix& x, const FeatureMatrix& y);

}  // namespace w2sc::eval
