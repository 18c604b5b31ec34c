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
#include "w2sc/app/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "w2sc/error.hpp"
#include "w2sc/train/trainer.hpp"

namespace w2sc::app {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kHarmonics = 39;
constexpr double kDirectPath = 0.35;
constexpr double kFadeSeconds = 0.02;

struct Resonator {
  double b0, a1, a2;  // y[n] = b0 x[n] - a1 y[n-1] - a2 y[n-2]
  double gain;        // unit gain at the center frequency
};

Resonator make_resonator(double freq, double bandwidth, int sr) {
  const double r = std::exp(-std::numbers::pi * bandwidth / sr);
  const double theta = kTwoPi * freq / sr;
  Resonator res{1.0 - r, -2.0 * r * std::cos(theta), r * r, 1.0};
  const std::complex<double> z = std::polar(1.0, -theta);
  res.gain = 1.0 / std::abs(res.b0 / (1.0 + res.a1 * z + res.a2 * z * z));
  return res;
}

std::vector<double> formant_filter(const std::vector<double>& x, const std::vector<Resonator>& rs) {
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) y[n] = kDirectPath * x[n];
  for (const auto& r : rs) {
    double y1 = 0.0, y2 = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double v = r.b0 * x[n] - r.a1 * y1 - r.a2 * y2;
      y2 = y1;
      y1 = v;
      y[n] += r.gain * v;
    }
  }
  return y;
}

double rms_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

SynthPair synth_pair(std::mt19937_64& rng, const SynthOptions& o) {
  if (o.sample_rate < 8000 || !(o.min_seconds > 0 && o.min_seconds <= o.max_seconds))
    throw InvalidArgument("synth_pair: bad options");
  const int sr = o.sample_rate;
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const auto n = static_cast<std::size_t>(uniform(o.min_seconds, o.max_seconds) * sr);
  const double base = uniform(120.0, 240.0);
  const double depth = uniform(10.0, 50.0);
  const double rate = uniform(1.0, 4.0);
  const double phase0 = uniform(0.0, kTwoPi);
  const double formants[3] = {uniform(300.0, 900.0), uniform(1000.0, 2200.0), uniform(2400.0, 3400.0)};
  std::vector<Resonator> rs;
  for (double f : formants) rs.push_back(make_resonator(f, uniform(80.0, 200.0), sr));

  std::vector<double> source(n, 0.0);
  double phase = 0.0;
  const double nyquist_guard = 0.95 * sr / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double f0 = std::clamp(base + depth * std::sin(kTwoPi * rate * t + phase0), 100.0, 300.0);
    phase += kTwoPi * f0 / sr;
    for (int k = 1; k <= kHarmonics && k * f0 < nyquist_guard; ++k) source[i] += std::sin(k * phase) / k;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(n);
  for (double& v : noise) v = gauss(rng);

  std::vector<double> normal = formant_filter(source, rs);
  std::vector<double> whisper = formant_filter(noise, rs);
  const auto fade = std::min(n / 2, static_cast<std::size_t>(kFadeSeconds * sr));
  for (std::size_t i = 0; i < fade; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(fade);
    normal[i] *= g;
    whisper[i] *= g;
    normal[n - 1 - i] *= g;
    whisper[n - 1 - i] *= g;
  }
  double peak = 0.0;
  for (double v : normal) peak = std::max(peak, std::abs(v));
  for (double& v : normal) v *= o.normal_peak / peak;
  const double scale = o.whisper_rms_ratio * rms_of(normal) / rms_of(whisper);
  for (double& v : whisper) v *= scale;

  SynthPair p;
  p.normal = {std::move(normal), sr};
  p.whisper = {std::move(whisper), sr};
  return p;
}

SynthPair synth_utterance(std::uint64_t seed, std::size_t index, const SynthOptions& options) {
  std::mt19937_64 rng(train::step_seed(seed, index));
  return synth_pair(rng, options);
}

}  // namespace w2sc::app
