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
#include "w2sc/train/segment.hpp"

#include "w2sc/error.hpp"

namespace w2sc::train {
namespace {

// Mirror index into [0, n) with the edge sample repeated (…, n-2, n-1, n-1, n-2, …).
std::size_t mirror(std::size_t t, std::size_t n) {
  const std::size_t r = t % (2 * n);
  return r < n ? r : 2 * n - 1 - r;
}

}  // namespace

SegmentedUtterance segment_utterance(const signal::MelSpectrogram& m, SegmentMode mode,
                                     std::size_t utterance) {
  if (m.frames == 0) throw InvalidArgument("segment_utterance: empty input");
  if (m.bands != kSegmentBands) {
    throw ShapeError("segment_utterance: expected " + std::to_string(kSegmentBands) +
                     " bands, got " + std::to_string(m.bands));
  }
  SegmentedUtterance out;
  out.original_frames = m.frames;
  const std::size_t count = mode == SegmentMode::kTrain
                                ? m.frames / kSegmentFrames
                                : (m.frames + kSegmentFrames - 1) / kSegmentFrames;
  out.segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Segment seg;
    seg.utterance = utterance;
    seg.start_frame = s * kSegmentFrames;
    seg.values.resize(kSegmentSize);
    for (std::size_t f = 0; f < kSegmentFrames; ++f) {
      const std::size_t t = mirror(seg.start_frame + f, m.frames);
      for (std::size_t b = 0; b < kSegmentBands; ++b)
        seg.values[b * kSegmentFrames + f] = m.at(t, b);
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

signal::MelSpectrogram reassemble(const std::vector<Segment>& segments,
                                  std::size_t original_frames) {
  if (segments.size() * kSegmentFrames < original_frames) {
    throw ShapeError("reassemble: " + std::to_string(segments.size()) +
                     " segments cannot cover " + std::to_string(original_frames) + " frames");
  }
  signal::MelSpectrogram m;
  m.frames = original_frames;
  m.bands = kSegmentBands;
  m.data.resize(original_frames * kSegmentBands);
  for (std::size_t t = 0; t < original_frames; ++t) {
    const Segment& seg = segments[t / kSegmentFrames];
    if (seg.values.size() != kSegmentSize) throw ShapeError("reassemble: malformed segment");
    const std::size_t f = t % kSegmentFrames;
    for (std::size_t b = 0; b < kSegmentBands; ++b) m.at(t, b) = seg.values[b * kSegmentFrames + f];
  }
  return m;
}

}  // namespace w2sc::train
