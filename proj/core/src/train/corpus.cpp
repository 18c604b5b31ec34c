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
#include "w2sc/train/corpus.hpp"

#include <algorithm>

#include "common/parallel.hpp"
#include "w2sc/error.hpp"

namespace w2sc::train {
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> mel_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw IoError("missing feature directory " + dir.string());
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mel") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Utterance> load_domain(const fs::path& dir) {
  const auto files = mel_files(dir);
  if (files.empty()) throw IoError("no feature files in " + dir.string());
  std::vector<Utterance> out(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) {
    out[i] = {files[i].stem().string(), signal::load_mel(files[i])};
  });
  return out;
}

signal::NormStats shared_norm(const std::vector<Utterance>& utts, const fs::path& dir) {
  const auto& first = utts.front().mel.norm;
  if (!first) throw InvalidArgument("features in " + dir.string() + " are not normalized");
  for (const auto& u : utts) {
    if (!u.mel.norm || !(*u.mel.norm == *first)) {
      throw InvalidArgument("features in " + dir.string() + " disagree on normalization stats");
    }
  }
  return *first;
}

}  // namespace

Corpus load_corpus(const fs::path& feature_dir) {
  Corpus c;
  c.whisper = load_domain(feature_dir / "whisper");
  c.normal = load_domain(feature_dir / "normal");
  c.whisper_norm = shared_norm(c.whisper, feature_dir / "whisper");
  c.normal_norm = shared_norm(c.normal, feature_dir / "normal");
  return c;
}

SegmentPool build_pool(const std::vector<Utterance>& utterances) {
  SegmentPool pool;
  pool.utterances = utterances.size();
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    auto segs = segment_utterance(utterances[i].mel, SegmentMode::kTrain, i);
    for (auto& s : segs.segments) pool.segments.push_back(std::move(s));
  }
  if (pool.segments.empty()) throw InvalidArgument("corpus has no utterance of 12 frames or more");
  return pool;
}

ad::Tensor<float> stack_segments(const std::vector<Segment>& segments,
                                 std::span<const std::size_t> index) {
  ad::Tensor<float> t({index.size(), 1, kSegmentBands, kSegmentFrames});
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& v = segments.at(index[i]).values;
    std::copy(v.begin(), v.end(), t.data() + i * kSegmentSize);
  }
  return t;
}

Batch sample_batch(const SegmentPool& whisper, const SegmentPool& normal, std::size_t batch_size,
                   std::mt19937_64& rng) {
  if (whisper.segments.empty() || normal.segments.empty()) {
    throw InvalidArgument("sample_batch: empty segment pool");
  }
  if (batch_size < 2) throw InvalidArgument("sample_batch: batch size must be at least 2");
  Batch b;
  std::uniform_int_distribution<std::size_t> pick_w(0, whisper.segments.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_n(0, normal.segments.size() - 1);
  for (std::size_t i = 0; i < batch_size; ++i) b.whisper_index.push_back(pick_w(rng));
  for (std::size_t i = 0; i < batch_size; ++i) b.normal_index.push_back(pick_n(rng));
  std::uniform_int_distribution<std::size_t> first(0, batch_size - 1);
  std::uniform_int_distribution<std::size_t> offset(1, batch_size - 1);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t a = first(rng);
    b.pairs.first.push_back(a);
    b.pairs.second.push_back((a + offset(rng)) % batch_size);
  }
  b.whisper = stack_segments(whisper.segments, b.whisper_index);
  b.normal = stack_segments(normal.segments, b.normal_index);
  return b;
}

}  // namespace w2sc::train
