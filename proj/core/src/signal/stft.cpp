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
#include "w2sc/signal/stft.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "w2sc/error.hpp"

namespace w2sc::signal {
namespace {

void validate(const StftConfig& config) {
  const std::size_t n = config.n_fft;
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidArgument("stft: n_fft must be a power of two");
  if (config.hop == 0 || config.hop > n) throw InvalidArgument("stft: hop must be in [1, n_fft]");
}

}  // namespace

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::kHann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return w;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

ComplexSpectrogram stft(std::span<const double> samples, const StftConfig& config) {
  validate(config);
  if (samples.empty()) throw InvalidArgument("stft: empty waveform");
  const std::size_t n = config.n_fft;
  const auto pad = static_cast<std::ptrdiff_t>(n / 2);
  const auto window = make_window(config.window, n);
  const auto& fft = detail::fft_for_size(n);

  ComplexSpectrogram spec;
  spec.config = config;
  spec.frames = config.frames_for(samples.size());
  spec.bins = config.bins();
  spec.data.resize(spec.frames * spec.bins);

  std::vector<double> frame(n);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t * config.hop) - pad;
    for (std::size_t i = 0; i < n; ++i) {
      frame[i] = samples[reflect_index(start + static_cast<std::ptrdiff_t>(i), samples.size())] * window[i];
    }
    fft.forward(frame, std::span(spec.data).subspan(t * spec.bins, spec.bins));
  }
  return spec;
}

std::vector<double> istft(const ComplexSpectrogram& spec, std::size_t length) {
  const StftConfig& config = spec.config;
  validate(config);
  if (length == 0) return {};
  const std::size_t n = config.n_fft;
  const auto pad = static_cast<std::ptrdiff_t>(n / 2);
  const auto window = make_window(config.window, n);
  const auto& fft = detail::fft_for_size(n);

  std::vector<double> num(length, 0.0);
  std::vector<double> den(length, 0.0);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    fft.inverse(std::span(spec.data).subspan(t * spec.bins, spec.bins), frame);
    const auto start = static_cast<std::ptrdiff_t>(t * config.hop) - pad;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = reflect_index(start + static_cast<std::ptrdiff_t>(i), length);
      num[src] += frame[i] * window[i];
      den[src] += window[i] * window[i];
    }
  }
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    if (den[i] > 1e-10) out[i] = num[i] / den[i];
  }
  return out;
}

Magnitude magnitude(const ComplexSpectrogram& spec) {
  Magnitude m;
  m.frames = spec.frames;
  m.bins = spec.bins;
  m.data.resize(spec.data.size());
  for (std::size_t i = 0; i < spec.data.size(); ++i) m.data[i] = std::abs(spec.data[i]);
  return m;
}

}  // namespace w2sc::signal
