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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cases.hpp"
#include "oracles.hpp"
#include "w2sc/error.hpp"
#include "w2sc/eval/dtw.hpp"
#include "w2sc/eval/f0.hpp"
#include "w2sc/eval/metrics.hpp"
#include "w2sc/eval/report.hpp"

namespace w2sc::eval {
namespace {

signal::Waveform wave(std::vector<double> x) { return {std::move(x), 16000}; }

TEST(F0, SineTracked) {
  const auto track = estimate_f0(wave(testing::sine(200.0, 1.0, 16000)));
  ASSERT_GT(track.size(), 90u);
  std::size_t hits = 0;
  for (double f : track.f0) hits += std::abs(f - 200.0) <= 2.0;
  EXPECT_GE(hits, static_cast<std::size_t>(0.95 * track.size()));
}

TEST(F0, NoiseUnvoiced) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 0.3);
  std::vector<double> x(16000);
  for (double& v : x) v = d(rng);
  EXPECT_LE(estimate_f0(wave(x)).voiced_fraction(), 0.10);
}

TEST(F0, SilenceUnvoiced) {
  const auto track = estimate_f0(wave(std::vector<double>(16000, 0.0)));
  EXPECT_EQ(track.voiced_fraction(), 0.0);
}

TEST(F0, ValuesInRange) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 0.1);
  auto x = testing::sine(150.0, 0.5, 16000);
  for (double& v : x) v += d(rng);
  for (double f : estimate_f0(wave(x)).f0) EXPECT_TRUE(f == 0.0 || (f >= 60.0 && f <= 400.0)) << f;
}

TEST(Alignment, CasesMatchOracles) {
  for (const auto& c : testing::alignment_cases()) EXPECT_NEAR(c.value, c.expected, 1e-9) << c.name;
}

FeatureMatrix random_features(std::size_t rows, std::mt19937_64& rng) {
  FeatureMatrix m{std::vector<double>(rows * 5), rows, 5};
  std::normal_distribution<double> d;
  for (double& v : m.data) v = d(rng);
  return m;
}

FeatureMatrix reversed(const FeatureMatrix& m) {
  FeatureMatrix r{{}, m.rows, m.cols};
  for (std::size_t i = m.rows; i-- > 0;) r.data.insert(r.data.end(), m.row(i), m.row(i) + m.cols);
  return r;
}

TEST(Dtw, ReversalSymmetryAndUnalignedBound) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_features(20, rng), y = random_features(20, rng);
    const double cost = dtw_align(x, y).cost;
    EXPECT_NEAR(cost, dtw_align(reversed(x), reversed(y)).cost, 1e-9);
    double unaligned = 0.0;
    for (std::size_t i = 0; i < 20; ++i) unaligned += frame_distance(x, i, y, i);
    EXPECT_LE(cost, unaligned + 1e-12);
  }
}

TEST(Dtw, WidthMismatchRejected) {
  EXPECT_THROW(dtw_align(FeatureMatrix{{1.0, 2.0}, 1, 2}, FeatureMatrix{{1.0}, 1, 1}), InvalidArgument);
  EXPECT_THROW(dtw_align(FeatureMatrix{{}, 0, 2}, FeatureMatrix{{1.0, 2.0}, 1, 2}), InvalidArgument);
}

TEST(Rmse, ProcessedDropsUnvoicedAndSilentReference) {
  const std::vector<double> c{100, 0, 150, 130, 90};
  const std::vector<double> t{101, 120, 0, 128, 200};
  const std::vector<bool> silent{false, false, false, false, true};
  const auto orig = rmse_f0(c, t, RmseVariant::kOriginal, silent);
  const auto proc = rmse_f0(c, t, RmseVariant::kProcessed, silent);
  EXPECT_EQ(orig.pairs, 5u);
  EXPECT_EQ(proc.pairs, 3u);
  EXPECT_NEAR(proc.value, std::sqrt(1.0 + 120.0 * 120.0 + 4.0), 1e-12);
  EXPECT_LE(proc.pairs, orig.pairs);
}

TEST(Rmse, AppendingEqualPairsKeepsProcessedValue) {
  std::vector<double> c{100, 0, 150}, t{104, 120, 0};
  const double before = rmse_f0(c, t, RmseVariant::kProcessed).value;
  c.insert(c.end(), {180.0, 190.0});
  t.insert(t.end(), {180.0, 190.0});
  EXPECT_EQ(rmse_f0(c, t, RmseVariant::kProcessed).value, before);
}

TEST(Rmse, EmptyAfterFilteringRejected) {
  const std::vector<double> c{100, 110}, t{0, 0};
  EXPECT_THROW(rmse_f0(c, t, RmseVariant::kProcessed), InvalidArgument);
  EXPECT_THROW(rmse_f0(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, RmseVariant::kOriginal),
               InvalidArgument);
}

signal::MelSpectrogram random_mel(std::size_t frames, std::mt19937_64& rng) {
  signal::MelSpectrogram m;
  m.frames = frames;
  m.data.resize(frames * m.bands);
  std::uniform_real_distribution<float> u(-8.0f, 2.0f);
  for (float& v : m.data) v = u(rng);
  return m;
}

AlignmentPath diagonal(std::size_t n) {
  AlignmentPath p;
  for (std::size_t i = 0; i < n; ++i) p.pairs.emplace_back(i, i);
  return p;
}

TEST(Mcd, ZeroForEqualInputs) {
  std::mt19937_64 rng(4);
  const auto m = random_mel(6, rng);
  EXPECT_EQ(mel_cepstral_distortion(m, m, diagonal(6)), 0.0);
}

TEST(Mcd, UnitShiftOnEveryCepstralBin) {
  std::mt19937_64 rng(5);
  const auto c = random_mel(4, rng);
  auto t = c;
  // Inverse of the cepstrum basis: adds exactly 1 to c_1..c_24.
  const std::size_t n = t.bands;
  for (std::size_t f = 0; f < t.frames; ++f) {
    for (std::size_t b = 0; b < n; ++b) {
      double add = 0.0;
      for (std::size_t k = 1; k <= kMcdOrder; ++k)
        add += 2.0 * std::cos(std::numbers::pi * k * (b + 0.5) / n);
      t.at(f, b) += static_cast<float>(add);
    }
  }
  const auto shifted = mel_cepstrum(t.frame(0));
  const auto base = mel_cepstrum(c.frame(0));
  EXPECT_NEAR(shifted[0] - base[0], 0.0, 1e-5);
  EXPECT_NEAR(shifted[1] - base[1], 1.0, 1e-5);
  EXPECT_NEAR(shifted[24] - base[24], 1.0, 1e-5);
  const double expected = 10.0 / std::numbers::ln10 * std::sqrt(2.0 * kMcdOrder);
  EXPECT_NEAR(mel_cepstral_distortion(c, t, diagonal(4)), expected, 1e-4);
}

TEST(Mcd, NonNegative) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5; ++i) {
    const auto a = random_mel(3, rng), b = random_mel(3, rng);
    EXPECT_GE(mel_cepstral_distortion(a, b, diagonal(3)), 0.0);
  }
}

TEST(Report, SelfEvaluationIsZero) {
  auto x = testing::sine(180.0, 1.0, 16000, 0.4);
  const auto m = evaluate_pair("self", wave(x), wave(x));
  EXPECT_EQ(m.rmse_f0_original, 0.0);
  EXPECT_EQ(m.rmse_f0_processed, 0.0);
  EXPECT_EQ(m.mcd_db, 0.0);
  EXPECT_GT(m.voiced_frame_fraction, 0.9);
}

TEST(Report, SummaryIsColumnMean) {
  std::vector<PairMetrics> rows{{"a", 1, 2, 3, 4, 0.5}, {"b", 3, 4, 5, 6, 0.25}};
  const auto s = summarize(rows);
  EXPECT_EQ(s.id, "mean");
  EXPECT_DOUBLE_EQ(s.rmse_f0_original, 2.0);
  EXPECT_DOUBLE_EQ(s.mcd_db, 5.0);
  EXPECT_DOUBLE_EQ(s.voiced_frame_fraction, 0.375);
  const std::string csv = format_report(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kReportHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

}  // namespace
}  // namespace w2sc::eval
