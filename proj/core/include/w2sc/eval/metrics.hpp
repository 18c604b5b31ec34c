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
#include <span>
#include <vector>

#include "w2sc/eval/dtw.hpp"
#include "w2sc/eval/f0.hpp"
#include "w2sc/signal/mel.hpp"

namespace w2sc::eval {

/// F0 values of a converted and a reference track paired along a path.
struct AlignedF0 {
  std::vector<double> converted;
  std::vector<double> reference;
  /// Per pair: the reference frame is silent.
  std::vector<bool> reference_silent;
};

/// Pairs c[i] with t[j] for every (i, j) of \p path. \p reference_silent is
/// indexed by reference frame and may be empty.
AlignedF0 align_f0(const F0Track& c, const F0Track& t, const AlignmentPath& path,
                   const std::vector<bool>& reference_silent = {});

enum class RmseVariant {
  kOriginal,   // every aligned pair
  kProcessed,  // pairs whose reference frame is silent or unvoiced are removed
};

struct RmseResult {
  double value = 0.0;       // sqrt(sum of squared differences)
  double normalized = 0.0;  // sqrt(mean of squared differences)
  std::size_t pairs = 0;    // k
};

/// F0 RMSE over aligned pairs. Throws InvalidArgument when the tracks differ
/// in length or no pair is left after filtering.
RmseResult rmse_f0(const AlignedF0& aligned, RmseVariant variant);
RmseResult rmse_f0(std::span<const double> converted, std::span<const double> reference,
                   RmseVariant variant, const std::vector<bool>& reference_silent = {});

/// Cepstral coefficients c1..c24 enter the distortion; c0 (energy) does not.
inline constexpr std::size_t kMcdOrder = 24;

/// Cepstrum of one log-mel frame, c_k = (1 / N) sum_n x_n cos(pi k (n + 1/2) / N);
/// coefficient 0 first.
std::vector<double> mel_cepstrum(std::span<const float> log_mel);

/// Mean over the path of 10 / ln 10 * sqrt(2 * sum_{k=1..24} (c_k - t_k)^2).
/// Normalized inputs are denormalized first.
double mel_cepstral_distortion(const signal::MelSpectrogram& c, const signal::MelSpectrogram& t,
                               const AlignmentPath& path);

}  // namespace w2sc::eval
