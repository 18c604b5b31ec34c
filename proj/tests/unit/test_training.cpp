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
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "w2sc/error.hpp"
#include "w2sc/train/checkpoint.hpp"
#include "w2sc/train/corpus.hpp"
#include "w2sc/train/segment.hpp"
#include "w2sc/train/trainer.hpp"

namespace w2sc::train {
namespace {

signal::MelSpectrogram random_mel(std::size_t frames, std::mt19937_64& rng) {
  signal::MelSpectrogram m;
  m.frames = frames;
  m.data.resize(frames * m.bands);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (float& v : m.data) v = u(rng);
  m.norm = signal::NormStats{-11.5f, 3.0f};
  return m;
}

std::vector<Utterance> utterances(std::size_t n, std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"u" + std::to_string(i), random_mel(frames, rng)});
  return out;
}

TrainConfig small_config() {
  TrainConfig c;
  c.batch_size = 2;
  c.steps = 12;
  c.seed = 7;
  return c;
}

TEST(Segment, TrainModeCounts) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(segment_utterance(random_mel(24, rng), SegmentMode::kTrain).segments.size(), 2u);
  EXPECT_EQ(segment_utterance(random_mel(12, rng), SegmentMode::kTrain).segments.size(), 1u);
  EXPECT_EQ(segment_utterance(random_mel(30, rng), SegmentMode::kTrain).segments.size(), 2u);
  EXPECT_THROW(segment_utterance(random_mel(0, rng), SegmentMode::kTrain), InvalidArgument);
}

TEST(Segment, ConvertModeRoundTrip) {
  std::mt19937_64 rng(2);
  const auto m = random_mel(30, rng);
  const auto s = segment_utterance(m, SegmentMode::kConvert);
  ASSERT_EQ(s.segments.size(), 3u);
  EXPECT_EQ(s.original_frames, 30u);
  const auto back = reassemble(s.segments, s.original_frames);
  ASSERT_EQ(back.frames, 30u);
  for (std::size_t i = 0; i < m.data.size(); ++i) ASSERT_EQ(back.data[i], m.data[i]);
  // Band-major layout: value (band b, frame f) of segment k is frame 12k + f.
  EXPECT_EQ(s.segments[1].values[5 * kSegmentFrames + 3], m.at(15, 5));
  // Mirrored padding: frames 30, 31, ... repeat 29, 28, ...
  EXPECT_EQ(s.segments[2].values[7 * kSegmentFrames + 6], m.at(29, 7));
  EXPECT_EQ(s.segments[2].values[7 * kSegmentFrames + 7], m.at(28, 7));
}

TEST(SampleBatch, DeterministicAndShaped) {
  const auto w = build_pool(utterances(3, 36, 1));
  const auto n = build_pool(utterances(3, 36, 2));
  std::mt19937_64 r1(5), r2(5);
  const auto a = sample_batch(w, n, 16, r1);
  const auto b = sample_batch(w, n, 16, r2);
  EXPECT_EQ(a.whisper.shape(), (ad::Shape{16, 1, 128, 12}));
  EXPECT_EQ(a.normal.shape(), (ad::Shape{16, 1, 128, 12}));
  EXPECT_EQ(a.whisper_index, b.whisper_index);
  EXPECT_EQ(a.normal_index, b.normal_index);
  EXPECT_EQ(a.pairs.first, b.pairs.first);
  ASSERT_EQ(a.pairs.size(), 16u);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) EXPECT_NE(a.pairs.first[k], a.pairs.second[k]);
}

TEST(SampleBatch, UniformOverUtterances) {
  // Unequal lengths: uniform over segments weights utterances by segment count.
  std::vector<Utterance> u;
  std::mt19937_64 rng(3);
  const std::vector<std::size_t> frames{12, 24, 36, 48, 60};
  for (std::size_t i = 0; i < frames.size(); ++i) u.push_back({"u", random_mel(frames[i], rng)});
  const auto pool = build_pool(u);
  ASSERT_EQ(pool.segments.size(), 15u);
  std::vector<double> hits(frames.size(), 0.0);
  std::mt19937_64 draw(4);
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws / 10; ++i) {
    const auto b = sample_batch(pool, pool, 10, draw);
    for (std::size_t j : b.whisper_index) hits[pool.segments[j].utterance] += 1.0;
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double p = static_cast<double>(i + 1) / 15.0;
    const double mean = draws * p, sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_NEAR(hits[i], mean, 3 * sigma) << "utterance " << i;
  }
}

Batch fixed_batch(std::uint64_t seed) {
  static const auto w = build_pool(utterances(3, 36, 11));
  static const auto n = build_pool(utterances(3, 36, 12));
  std::mt19937_64 rng(seed);
  return sample_batch(w, n, 2, rng);
}

TEST(TrainStep, ThreeToOneSchedule) {
  auto st = make_train_state(small_config());
  std::size_t reported = 0;
  for (std::uint64_t k = 0; k < 12; ++k) {
    const auto r = train_step(st, fixed_batch(k));
    EXPECT_EQ(r.step, k + 1);
    reported += r.loss_d.has_value();
    EXPECT_EQ(r.loss_d.has_value(), (k + 1) % 3 == 0);
  }
  EXPECT_EQ(st.d_updates(), 4u);
  EXPECT_EQ(reported, 4u);
  for (std::uint64_t k = 1; k <= 30; ++k) EXPECT_EQ(is_d_step(k, 3), k % 3 == 0);
}

std::vector<std::vector<float>> all_params(const TrainState& st) {
  std::vector<std::vector<float>> out;
  for (const auto* list : {&st.opt_g.params(), &st.opt_s.params(), &st.opt_d.params()})
    for (const auto& p : *list) out.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

TEST(TrainStep, ZeroLearningRateLeavesParameters) {
  auto cfg = small_config();
  cfg.lr_g = 0.0;
  cfg.lr_d = 0.0;
  auto st = make_train_state(cfg);
  const auto before = all_params(st);
  for (std::uint64_t k = 0; k < 3; ++k) {
    const auto r = train_step(st, fixed_batch(k));
    EXPECT_TRUE(std::isfinite(r.loss_g_adv));
    EXPECT_GT(r.loss_id, 0.0);
  }
  EXPECT_EQ(all_params(st), before);
}

TEST(TrainStep, NonFiniteNamesTerm) {
  auto st = make_train_state(small_config());
  auto b = fixed_batch(0);
  b.normal.values()[3] = std::numeric_limits<float>::quiet_NaN();
  try {
    train_step(st, b);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_NE(std::string(e.what()).find("L_id"), std::string::npos) << e.what();
  }
}

TEST(TrainConfigValidation, RejectsBadFields) {
  auto c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.lr_g = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.lr_d = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.g_steps_per_d_step = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.batch_size = 1;
  EXPECT_THROW(c.validate(), ConfigError);
}

void expect_same(const CheckpointFile& a, const CheckpointFile& b) {
  EXPECT_EQ(a.step, b.step);
  ASSERT_EQ(a.tensors.size(), b.tensors.size());
  for (std::size_t i = 0; i < a.tensors.size(); ++i) {
    EXPECT_EQ(a.tensors[i].name, b.tensors[i].name);
    EXPECT_EQ(a.tensors[i].dims, b.tensors[i].dims);
    EXPECT_EQ(0, std::memcmp(a.tensors[i].data.data(), b.tensors[i].data.data(),
                             a.tensors[i].data.size() * sizeof(float)))
        << a.tensors[i].name;
  }
}

TEST(Checkpoint, BitwiseRoundTrip) {
  testing::TempDir dir("ckpt");
  auto st = make_train_state(small_config());
  for (std::uint64_t k = 0; k < 3; ++k) train_step(st, fixed_batch(k));
  save_checkpoint(st, dir / "a.ckpt");
  auto other = make_train_state(small_config());
  load_checkpoint(dir / "a.ckpt", other);
  expect_same(snapshot(st), snapshot(other));
  EXPECT_EQ(other.step, 3u);
  EXPECT_EQ(other.d_updates(), 1u);
}

TEST(Checkpoint, TruncatedFileIsCorrupt) {
  testing::TempDir dir("ckpt");
  auto st = make_train_state(small_config());
  save_checkpoint(st, dir / "a.ckpt");
  const auto size = std::filesystem::file_size(dir / "a.ckpt");
  std::filesystem::resize_file(dir / "a.ckpt", size / 2);
  EXPECT_THROW(load_checkpoint(dir / "a.ckpt", st), CorruptCheckpoint);
}

TEST(Checkpoint, UnknownTensorAndVersionRejected) {
  testing::TempDir dir("ckpt");
  auto st = make_train_state(small_config());
  auto file = snapshot(st);
  file.tensors.push_back({"X.extra", {1}, {0.0f}});
  write_checkpoint_file(dir / "a.ckpt", file);
  EXPECT_THROW(load_checkpoint(dir / "a.ckpt", st), CorruptCheckpoint);

  save_checkpoint(st, dir / "b.ckpt");
  std::fstream f(dir / "b.ckpt", std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(9);
  const char bad = 7;
  f.write(&bad, 1);
  f.close();
  EXPECT_THROW(load_checkpoint(dir / "b.ckpt", st), CorruptCheckpoint);
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(RunTraining, DeterministicAndResumable) {
  testing::TempDir dir("run");
  const auto w = build_pool(utterances(3, 36, 21));
  const auto n = build_pool(utterances(3, 36, 22));
  auto cfg = small_config();
  cfg.steps = 9;

  auto full = make_train_state(cfg);
  run_training(full, w, n, {dir / "full", dir / "full.csv", 0, {}});
  auto again = make_train_state(cfg);
  run_training(again, w, n, {{}, dir / "again.csv", 0, {}});
  const auto log = read_lines(dir / "full.csv");
  ASSERT_EQ(log.size(), 10u);
  EXPECT_EQ(log.front(), kLossLogHeader);
  EXPECT_EQ(read_lines(dir / "again.csv"), log);

  auto first = make_train_state(cfg);
  run_training(first, w, n, {dir / "part", dir / "part.csv", 4, {}});
  EXPECT_TRUE(std::filesystem::exists(dir / "part" / "step_000004.ckpt"));
  auto resumed = make_train_state(cfg);
  load_checkpoint(dir / "part" / "latest.ckpt", resumed);
  EXPECT_EQ(resumed.step, 4u);
  run_training(resumed, w, n, {dir / "part", dir / "part.csv", 0, {}});
  EXPECT_EQ(read_lines(dir / "part.csv"), log);
  expect_same(snapshot(full), snapshot(resumed));
}

TEST(RunTraining, ZeroBudgetWritesInitialCheckpoint) {
  testing::TempDir dir("run");
  const auto w = build_pool(utterances(2, 24, 31));
  auto cfg = small_config();
  cfg.steps = 0;
  auto st = make_train_state(cfg);
  run_training(st, w, w, {dir / "ck", {}, 0, {}});
  EXPECT_TRUE(std::filesystem::exists(dir / "ck" / "latest.ckpt"));
  EXPECT_EQ(st.step, 0u);
}

TEST(Convert, LengthPreservedAndBatchIndependent) {
  auto cfg = small_config();
  auto st = make_train_state(cfg);
  st.g.attention.gamma.values()[0] = 0.4f;
  std::mt19937_64 rng(41);
  const auto m = random_mel(61, rng);
  const signal::NormStats target{-10.0f, 2.0f};
  const auto batched = convert_utterance(st.g, m, target, 64);
  const auto single = convert_utterance(st.g, m, target, 1);
  EXPECT_EQ(batched.frames, 61u);
  ASSERT_TRUE(batched.norm.has_value());
  EXPECT_EQ(*batched.norm, target);
  ASSERT_EQ(batched.data.size(), single.data.size());
  for (std::size_t i = 0; i < batched.data.size(); ++i) ASSERT_EQ(batched.data[i], single.data[i]) << i;
}

TEST(Convert, ZeroWeightsGiveConstantField) {
  auto st = make_train_state(small_config());
  for (const auto& p : st.g.parameters()) {
    auto t = p.tensor;
    std::fill(t.values().begin(), t.values().end(), 0.0f);
  }
  std::mt19937_64 rng(42);
  const auto out = convert_utterance(st.g, random_mel(25, rng), {-10.0f, 2.0f});
  for (float v : out.data) ASSERT_EQ(v, out.data[0]);
}

}  // namespace
}  // namespace w2sc::train
