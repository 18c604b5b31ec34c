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
#include "w2sc/eval/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "w2sc/error.hpp"

namespace w2sc::eval {

FeatureMatrix features_from_mel(const signal::MelSpectrogram& m) {
  return {std::vector<double>(m.data.begin(), m.data.end()), m.frames, m.bands};
}

double frame_distance(const FeatureMatrix& x, std::size_t i, const FeatureMatrix& y,
                      std::size_t j) {
  const double* a = x.row(i);
  const double* b = y.row(j);
  double s = 0.0;
  for (std::size_t k = 0; k < x.cols; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

DtwResult dtw_align(const FeatureMatrix& x, const FeatureMatrix& y) {
  if (x.rows == 0 || y.rows == 0) throw InvalidArgument("dtw_align: empty sequence");
  if (x.cols != y.cols) {
    throw InvalidArgument("dtw_align: feature widths differ (" + std::to_string(x.cols) + " vs " +
                          std::to_string(y.cols) + ")");
  }
  const std::size_t n = x.rows, m = y.rows;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(n * m, kInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return acc[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double prev = 0.0;
      if (i > 0 || j > 0) {
        prev = kInf;
        if (i > 0 && j > 0) prev = at(i - 1, j - 1);
        if (i > 0) prev = std::min(prev, at(i - 1, j));
        if (j > 0) prev = std::min(prev, at(i, j - 1));
      }
      at(i, j) = prev + frame_distance(x, i, y, j);
    }
  }

  DtwResult result;
  result.cost = at(n - 1, m - 1);
  std::size_t i = n - 1, j = m - 1;
  result.path.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    result.path.pairs.emplace_back(i, j);
  }
  std::reverse(result.path.pairs.begin(), result.path.pairs.end());
  return result;
}

}  // namespace w2sc::eval
