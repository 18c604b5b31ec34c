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

#include <cstdint>
#include <filesystem>
#include <random>

#include "w2sc/signal/waveform.hpp"

namespace w2sc::app {

struct SynthOptions {
  int sample_rate = 16000;
  double min_seconds = 1.2;
  double max_seconds = 2.0;
  double normal_peak = 0.5;
  /// Whisper RMS relative to its normal twin (-20 dB).
  double whisper_rms_ratio = 0.1;
};

/// A voiced utterance and its whispered twin through the same formant filter.
struct SynthPair {
  signal::Waveform normal;
  signal::Waveform whisper;
};

/// Harmonic source with a sinusoidally modulated F0 in [100, 300] Hz, or
/// white noise for the whisper, through three parallel formant resonators
/// plus a direct path, with 20 ms fades.
SynthPair synth_pair(std::mt19937_64& rng, const SynthOptions& options = {});

/// Pair \p index of the corpus drawn from \p seed; independent of other indices.
SynthPair synth_utterance(std::uint64_t seed, std::size_t index, const SynthOptions& options = {});

}  // namespace w2sc::app
