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

#include "w2sc/signal/mel.hpp"

namespace w2sc::train {

inline constexpr std::size_t kSegmentFrames = 12;
inline constexpr std::size_t kSegmentBands = signal::kMelBands;
inline constexpr std::size_t kSegmentSize = kSegmentFrames * kSegmentBands;

/// A 128×12 mel slice stored band-major ([band][frame]), the layout of one
/// [1, 128, 12] network input.
struct Segment {
  std::vector<float> values;
  std::size_t utterance = 0;
  std::size_t start_frame = 0;
};

enum class SegmentMode {
  kTrain,    // non-overlapping windows; a remainder shorter than 12 is dropped
  kConvert,  // the last window is completed by mirroring the final frames
};

struct SegmentedUtterance {
  std::vector<Segment> segments;
  std::size_t original_frames = 0;
};

SegmentedUtterance segment_utterance(const signal::MelSpectrogram& m, SegmentMode mode,
                                     std::size_t utterance = 0);

/// Concatenates segment outputs back into frames and trims to
/// \p original_frames.
signal::MelSpectrogram reassemble(const std::vector<Segment>& segments,
                                  std::size_t original_frames);

}  // namespace w2sc::train
