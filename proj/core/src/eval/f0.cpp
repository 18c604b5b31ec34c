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
#include "w2sc/eval/f0.hpp"

#include <algorithm>
#include <cmath>

#include "w2sc/error.hpp"

namespace w2sc::eval {

double F0Track::voiced_fraction() const {
  if (f0.empty()) return 0.0;
  const auto voiced = std::count_if(f0.begin(), f0.end(), [](double f) { return f > 0.0; });
  return static_cast<double>(voiced) / static_cast<double>(f0.size());
}

F0Track estimate_f0(const signal::Waveform& w, const F0Options& o) {
  const double sr = w.sample_rate;
  if (sr <= 0) throw InvalidArgument("estimate_f0: sample rate must be positive");
  if (!(o.f_floor > 0 && o.f_floor < o.f_ceil && o.f_ceil < sr / 2))
    throw InvalidArgument("estimate_f0: need 0 < f_floor < f_ceil < sample_rate / 2");
  const auto frame = static_cast<std::size_t>(std::lround(o.frame_seconds * sr));
  const auto hop = static_cast<std::size_t>(std::lround(o.hop_seconds * sr));
  if (frame < 2 || hop == 0) throw InvalidArgument("estimate_f0: frame and hop must be positive");
  const auto lag_min = static_cast<std::size_t>(std::floor(sr / o.f_ceil));
  const auto lag_max = static_cast<std::size_t>(std::ceil(sr / o.f_floor));

  F0Track track;
  track.hop_seconds = static_cast<double>(hop) / sr;
  const std::size_t n = w.size();
  const std::size_t frames = 1 + n / hop;
  track.f0.assign(frames, 0.0);

  // Zero-padded copy so that frame i starts at i * hop and every lagged
  // window stays in range.
  const std::size_t lead = frame / 2;
  std::vector<double> x(lead + n + frame + lag_max + 2, 0.0);
  std::copy(w.samples.begin(), w.samples.end(), x.begin() + static_cast<std::ptrdiff_t>(lead));
  std::vector<double> energy(x.size() + 1, 0.0);  // prefix sums of squares
  for (std::size_t i = 0; i < x.size(); ++i) energy[i + 1] = energy[i] + x[i] * x[i];
  auto window_energy = [&](std::size_t s) { return std::max(0.0, energy[s + frame] - energy[s]); };

  std::vector<double> r(lag_max + 2, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t s = t * hop;
    const double e0 = window_energy(s);
    if (e0 < 1e-10) continue;
    const double* a = x.data() + s;
    for (std::size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      const double* b = a + lag;
      double dot = 0.0;
      for (std::size_t k = 0; k < frame; ++k) dot += a[k] * b[k];
      r[lag] = dot / std::sqrt(e0 * window_energy(s + lag) + 1e-20);
    }
    const double peak = *std::max_element(r.begin() + static_cast<std::ptrdiff_t>(lag_min),
                                          r.begin() + static_cast<std::ptrdiff_t>(lag_max + 1));
    if (peak < o.voicing_threshold) continue;
    std::size_t best = 0;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
      if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= peak - o.peak_tolerance) {
        best = lag;
        break;
      }
    }
    if (best == 0) continue;
    const double y0 = r[best - 1], y1 = r[best], y2 = r[best + 1];
    const double curvature = y0 - 2.0 * y1 + y2;
    const double offset = curvature != 0.0 ? std::clamp(0.5 * (y0 - y2) / curvature, -0.5, 0.5) : 0.0;
    track.f0[t] = std::clamp(sr / (static_cast<double>(best) + offset), o.f_floor, o.f_ceil);
  }
  return track;
}

}  // namespace w2sc::eval
