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
#include <cstdint>
#include <optional>
#include <vector>

#include "w2sc/signal/stft.hpp"

namespace w2sc::signal {

struct GriffinLimOptions {
  std::size_t iterations = 60;
  /// Zero initial phase when unset; otherwise uniform random phase from the seed.
  std::optional<std::uint64_t> random_phase_seed;
  /// Record the spectral convergence error after every iteration.
  bool track_error = false;
  /// Output length in samples; 0 selects (T - 1) * hop. Must map back to the
  /// magnitude's frame count under the framing convention.
  std::size_t length = 0;
};

struct GriffinLimResult {
  Waveform waveform;
  /// ||(|STFT(x_i)| - mag)|| / ||mag|| after iteration i (when tracked).
  std::vector<double> convergence;
};

/// Phase retrieval from a linear magnitude (T x (1 + n_fft/2)). Each iteration
/// runs istft, stft and then re-imposes the target magnitude. The output length
/// defaults to (T - 1) * hop samples, the inverse of the framing convention.
GriffinLimResult griffin_lim(const Magnitude& mag, const StftConfig& config, int sample_rate,
                             const GriffinLimOptions& options = {});

/// ||(|STFT(x)| - mag)|| / ||mag||; 0 when mag is all zero.
double spectral_convergence(const Magnitude& reconstructed, const Magnitude& target);

}  // namespace w2sc::signal
