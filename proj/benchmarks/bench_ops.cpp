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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "w2sc/eval/dtw.hpp"
#include "w2sc/eval/f0.hpp"
#include "w2sc/nn/generator.hpp"
#include "w2sc/signal/griffin_lim.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/tensor/ops.hpp"

namespace {

using namespace w2sc;

ad::Tensor<float> segments(std::size_t n, std::uint64_t seed) {
  ad::Tensor<float> x({n, 1, nn::kSegmentBands, nn::kSegmentFrames});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (float& v : x.values()) v = u(rng);
  return x;
}

signal::Waveform chirp(double seconds) {
  signal::Waveform w;
  w.sample_rate = 16000;
  const auto n = static_cast<std::size_t>(seconds * w.sample_rate);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / w.sample_rate;
    w.samples.push_back(0.5 * std::sin(2 * M_PI * (120.0 * t + 40.0 * t * t)));
  }
  return w;
}

void BM_GeneratorForward(benchmark::State& state) {
  nn::Generator<float> g;
  std::mt19937_64 rng(1);
  g.init(rng);
  const auto x = segments(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    ad::Tape<float> tape(ad::Tape<float>::Mode::kNoGrad);
    benchmark::DoNotOptimize(g.forward(tape, x).values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratorForward)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GeneratorBackward(benchmark::State& state) {
  nn::Generator<float> g;
  std::mt19937_64 rng(1);
  g.init(rng);
  const auto x = segments(16, 3);
  for (auto _ : state) {
    for (const auto& p : g.parameters()) {
      auto t = p.tensor;
      t.zero_grad();
    }
    ad::Tape<float> tape;
    tape.backward(ad::mean(tape, g.forward(tape, x)));
  }
}
BENCHMARK(BM_GeneratorBackward)->Unit(benchmark::kMillisecond);

void BM_MelSpectrogram(benchmark::State& state) {
  const auto w = chirp(2.0);
  const signal::MelFilterbank fb(128, 1024, 16000, 0.0, 8000.0);
  const signal::MelConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(signal::mel_spectrogram(w, fb, config).data.data());
}
BENCHMARK(BM_MelSpectrogram)->Unit(benchmark::kMillisecond);

void BM_GriffinLim(benchmark::State& state) {
  const auto w = chirp(2.0);
  const signal::StftConfig config;
  const auto mag = signal::magnitude(signal::stft(w.samples, config));
  for (auto _ : state)
    benchmark::DoNotOptimize(signal::griffin_lim(mag, config, w.sample_rate).waveform.samples.data());
}
BENCHMARK(BM_GriffinLim)->Unit(benchmark::kMillisecond);

void BM_EstimateF0(benchmark::State& state) {
  const auto w = chirp(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval::estimate_f0(w).f0.data());
}
BENCHMARK(BM_EstimateF0)->Unit(benchmark::kMillisecond);

void BM_Dtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d;
  eval::FeatureMatrix x{{}, n, 128}, y{{}, n + n / 4, 128};
  for (std::size_t i = 0; i < x.rows * x.cols; ++i) x.data.push_back(d(rng));
  for (std::size_t i = 0; i < y.rows * y.cols; ++i) y.data.push_back(d(rng));
  for (auto _ : state) benchmark::DoNotOptimize(eval::dtw_align(x, y).cost);
}
BENCHMARK(BM_Dtw)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
