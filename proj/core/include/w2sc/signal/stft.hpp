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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "w2sc/signal/waveform.hpp"

namespace w2sc::signal {

enum class WindowKind { kHann, kRectangular };

/// Periodic window of length \p n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

struct StftConfig {
  std::size_t n_fft = 1024;
  std::size_t hop = 256;
  WindowKind window = WindowKind::kHann;

  std::size_t bins() const { return n_fft / 2 + 1; }
  /// Frames produced for a signal of \p length samples: 1 + length / hop.
  std::size_t frames_for(std::size_t length) const { return 1 + length / hop; }
};

/// T x (1 + n_fft/2) complex matrix, frame-major.
struct ComplexSpectrogram {
  std::vector<std::complex<double>> data;
  std::size_t frames = 0;
  std::size_t bins = 0;
  StftConfig config;

  std::complex<double>& at(std::size_t t, std::size_t k) { return data[t * bins + k]; }
  const std::complex<double>& at(std::size_t t, std::size_t k) const {
    return data[t * bins + k];
  }
};

/// Real T x bins matrix, frame-major. Used for linear magnitudes.
struct Magnitude {
  std::vector<double> data;
  std::size_t frames = 0;
  std::size_t bins = 0;

  double& at(std::size_t t, std::size_t k) { return data[t * bins + k]; }
  double at(std::size_t t, std::size_t k) const { return data[t * bins + k]; }
};

/// Centered short-time Fourier transform. The signal is reflect-padded by
/// n_fft/2 on both sides; frame t covers padded samples [t*hop, t*hop+n_fft).
/// Throws InvalidArgument for an empty signal, a non power-of-two n_fft or
/// hop > n_fft.
ComplexSpectrogram stft(std::span<const double> samples, const StftConfig& config);

/// Least-squares inverse of stft() for a signal of \p length samples.
/// Reflected padding contributions are folded back onto their source samples,
/// so istft(stft(x)) == x up to rounding.
std::vector<double> istft(const ComplexSpectrogram& spec, std::size_t length);

Magnitude magnitude(const ComplexSpectrogram& spec);

/// Index into a signal of length n after symmetric (edge-excluded) reflection.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

}  // namespace w2sc::signal
