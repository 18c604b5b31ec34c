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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "w2sc/losses/losses.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/tensor/tensor.hpp"
#include "w2sc/train/segment.hpp"

namespace w2sc::train {

struct Utterance {
  std::string id;  // source file stem
  signal::MelSpectrogram mel;
};

/// Normalized features of both domains. Pairing by file name is recorded in
/// the ids but not used by any loss.
struct Corpus {
  std::vector<Utterance> whisper;
  std::vector<Utterance> normal;
  signal::NormStats whisper_norm;
  signal::NormStats normal_norm;
};

/// Reads "<dir>/whisper/*.mel" and "<dir>/normal/*.mel" in file-name order.
/// Files are decoded concurrently and collected by index.
Corpus load_corpus(const std::filesystem::path& feature_dir);

/// All training-mode segments of one domain in utterance order.
struct SegmentPool {
  std::vector<Segment> segments;
  std::size_t utterances = 0;
};

SegmentPool build_pool(const std::vector<Utterance>& utterances);

struct Batch {
  ad::Tensor<float> whisper;  // [B, 1, 128, 12]
  ad::Tensor<float> normal;   // [B, 1, 128, 12]
  std::vector<std::size_t> whisper_index;  // into the whisper pool
  std::vector<std::size_t> normal_index;   // into the normal pool
  losses::PairIndices pairs;               // distinct (a1, a2) rows of the whisper half
};

/// Draws \p batch_size segments uniformly from each pool independently and one
/// (a1, a2) pair of distinct rows per whisper row.
Batch sample_batch(const SegmentPool& whisper, const SegmentPool& normal, std::size_t batch_size,
                   std::mt19937_64& rng);

/// Stacks segments into a [N, 1, 128, 12] tensor.
ad::Tensor<float> stack_segments(const std::vector<Segment>& segments,
                                 std::span<const std::size_t> index);

}  // namespace w2sc::train
