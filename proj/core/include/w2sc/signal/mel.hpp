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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "w2sc/signal/stft.hpp"

namespace w2sc::signal {

inline constexpr std::size_t kMelBands = 128;

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters on the HTK mel scale, unit peak, bands x bins.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate, double f_min,
                double f_max);

  std::size_t bands() const { return bands_; }
  std::size_t bins() const { return bins_; }
  std::size_t n_fft() const { return n_fft_; }
  int sample_rate() const { return sample_rate_; }
  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }
  double weight(std::size_t band, std::size_t bin) const { return weights_[band * bins_ + bin]; }
  std::span<const double> weights() const { return weights_; }
  /// Center frequency (Hz) of each band.
  const std::vector<double>& centers() const { return centers_; }

 private:
  std::size_t bands_;
  std::size_t bins_;
  std::size_t n_fft_;
  int sample_rate_;
  double f_min_;
  double f_max_;
  std::vector<double> weights_;
  std::vector<double> centers_;
};

/// Min-max statistics used to map log-mel values onto [-1, 1].
struct NormStats {
  float min = 0.0f;
  float max = 1.0f;

  bool operator==(const NormStats&) const = default;
};

/// T x bands matrix of log-mel values, frame-major. When \c norm is set the
/// values are normalized to [-1, 1] with those statistics.
struct MelSpectrogram {
  std::vector<float> data;
  std::size_t frames = 0;
  std::size_t bands = kMelBands;
  std::optional<NormStats> norm;

  float& at(std::size_t t, std::size_t b) { return data[t * bands + b]; }
  float at(std::size_t t, std::size_t b) const { return data[t * bands + b]; }
  std::span<const float> frame(std::size_t t) const {
    return std::span<const float>(data).subspan(t * bands, bands);
  }
};

struct MelConfig {
  StftConfig stft;
  double log_floor = 1e-5;
};

/// log(max(fb . |STFT(w)|, floor)); unnormalized.
MelSpectrogram mel_spectrogram(const Waveform& w, const MelFilterbank& fb,
                               const MelConfig& config);

/// Same as above on an already computed magnitude.
MelSpectrogram mel_from_magnitude(const Magnitude& mag, const MelFilterbank& fb,
                                  double log_floor);

/// Statistics over every value of every spectrogram. Throws on empty input.
NormStats compute_norm_stats(std::span<const MelSpectrogram> corpus);

/// Maps log values onto [-1, 1] (clipping values outside the statistics).
MelSpectrogram normalize(const MelSpectrogram& m, const NormStats& stats);
/// Inverse of normalize(); returns log-domain values with \c norm cleared.
MelSpectrogram denormalize(const MelSpectrogram& m);

/// Ridge-regularized least-squares inversion of a mel filterbank. The
/// pseudo-inverse is precomputed once per filterbank.
class MelInverter {
 public:
  explicit MelInverter(const MelFilterbank& fb, double ridge = 1e-3);

  /// Linear magnitudes from a log-domain (denormalized) mel spectrogram.
  /// Negative least-squares estimates are clipped to zero. A normalized input
  /// is denormalized first.
  Magnitude invert(const MelSpectrogram& m) const;
  /// Same, taking linear mel magnitudes (T x bands).
  Magnitude invert_linear(std::span<const double> mel, std::size_t frames) const;

 private:
  std::size_t bands_;
  std::size_t bins_;
  std::vector<double> pinv_;  // bins x bands
};

/// Persists \p m as "W2SC-MEL1", u32 T, u32 bands, f32 LE data, then the two
/// normalization statistics (0, 0 when the spectrogram is unnormalized).
void save_mel(const std::filesystem::path& path, const MelSpectrogram& m);
MelSpectrogram load_mel(const std::filesystem::path& path);

}  // namespace w2sc::signal
