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
#include <vector>

#include "w2sc/signal/waveform.hpp"

namespace w2sc::eval {

struct F0Options {
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  double f_floor = 60.0;
  double f_ceil = 400.0;
  /// Minimum normalized cross-correlation peak for a voiced frame.
  double voicing_threshold = 0.3;
  /// The smallest-lag local peak within this distance of the best peak wins,
  /// which avoids octave-down errors.
  double peak_tolerance = 0.05;
};

/// Per-frame F0 in Hz, 0 for unvoiced frames. Frame i is centered on sample
/// i * hop, so a signal of n samples has 1 + n / hop frames.
struct F0Track {
  std::vector<double> f0;
  double hop_seconds = 0.010;

  std::size_t size() const { return f0.size(); }
  double voiced_fraction() const;
};

/// Normalized cross-correlation pitch estimate with parabolic peak
/// refinement. Throws InvalidArgument for inconsistent options.
F0Track estimate_f0(const signal::Waveform& w, const F0Options& options = {});

}  // namespace w2sc::eval
