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
#include "w2sc/signal/griffin_lim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "w2sc/error.hpp"

namespace w2sc::signal {

double spectral_convergence(const Magnitude& reconstructed, const Magnitude& target) {
  if (reconstructed.data.size() != target.data.size()) {
    throw ShapeError("spectral convergence: magnitude shapes differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < target.data.size(); ++i) {
    const double d = reconstructed.data[i] - target.data[i];
    num += d * d;
    den += target.data[i] * target.data[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

GriffinLimResult griffin_lim(const Magnitude& mag, const StftConfig& config, int sample_rate,
                             const GriffinLimOptions& options) {
  if (options.iterations == 0) throw InvalidArgument("griffin_lim: iterations must be >= 1");
  if (mag.bins != config.bins()) throw ShapeError("griffin_lim: magnitude bins do not match n_fft");
  if (mag.frames == 0) throw InvalidArgument("griffin_lim: empty magnitude");
  for (double v : mag.data) {
    if (!(v >= 0.0)) throw InvalidArgument("griffin_lim: magnitude must be nonnegative");
  }
  const std::size_t length = options.length > 0
                                 ? options.length
                                 : std::max<std::size_t>(1, (mag.frames - 1) * config.hop);
  if (config.frames_for(length) != mag.frames) {
    throw ShapeError("griffin_lim: output length does not match the frame count");
  }

  ComplexSpectrogram spec;
  spec.config = config;
  spec.frames = mag.frames;
  spec.bins = mag.bins;
  spec.data.resize(mag.data.size());
  if (options.random_phase_seed) {
    std::mt19937_64 rng(*options.random_phase_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < mag.data.size(); ++i) spec.data[i] = std::polar(mag.data[i], phase(rng));
  } else {
    for (std::size_t i = 0; i < mag.data.size(); ++i) spec.data[i] = mag.data[i];
  }

  GriffinLimResult result;
  std::vector<double> x = istft(spec, length);
  ComplexSpectrogram estimate = stft(x, config);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    for (std::size_t i = 0; i < spec.data.size(); ++i) {
      const double a = std::abs(estimate.data[i]);
      spec.data[i] = a > 1e-12 ? estimate.data[i] * (mag.data[i] / a)
                               : std::complex<double>(mag.data[i], 0.0);
    }
    x = istft(spec, length);
    estimate = stft(x, config);
    if (options.track_error) {
      result.convergence.push_back(spectral_convergence(magnitude(estimate), mag));
    }
  }
  result.waveform.samples = std::move(x);
  result.waveform.sample_rate = sample_rate;
  return result;
}

}  // namespace w2sc::signal
