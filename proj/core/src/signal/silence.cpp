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
#include "w2sc/signal/silence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace w2sc::signal {

std::vector<double> frame_energy_db(const MelSpectrogram& m) {
  const MelSpectrogram logm = denormalize(m);
  std::vector<double> energy(logm.frames);
  for (std::size_t t = 0; t < logm.frames; ++t) {
    double power = 0.0;
    for (float v : logm.frame(t)) power += std::exp(2.0 * static_cast<double>(v));
    energy[t] = 10.0 * std::log10(std::max(power, std::numeric_limits<double>::min()));
  }
  return energy;
}

std::vector<bool> frame_silence_mask(const MelSpectrogram& m, double threshold_db) {
  const auto energy = frame_energy_db(m);
  std::vector<bool> mask(energy.size(), false);
  if (energy.empty()) return mask;
  const double peak = *std::max_element(energy.begin(), energy.end());
  for (std::size_t t = 0; t < energy.size(); ++t) mask[t] = energy[t] < peak - threshold_db;
  return mask;
}

}  // namespace w2sc::signal
