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
#include <vector>

namespace w2sc::signal {

/// Mono audio. Samples are expected in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Reads a 16-bit PCM RIFF/WAVE file. Multi-channel files keep only the
/// first channel. When \p target_rate is positive and differs from the file
/// rate the signal is resampled to it.
///
/// Throws IoError on a missing file, a malformed header or an encoding other
/// than 16-bit PCM.
Waveform load_wav(const std::filesystem::path& path, int target_rate = 0);

/// Writes 16-bit PCM mono. Samples are clipped to [-1, 1] before quantizing.
void save_wav(const std::filesystem::path& path, const Waveform& w);

/// Band-limited (windowed-sinc) sample-rate conversion. The output length is
/// round(n * to / from).
Waveform resample(const Waveform& w, int target_rate);

/// Root-mean-square amplitude; 0 for an empty waveform.
double rms(const Waveform& w);

}  // namespace w2sc::signal
