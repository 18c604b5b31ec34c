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
#include "w2sc/signal/mel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "../common/binary_io.hpp"
#include "w2sc/error.hpp"

namespace w2sc::signal {
namespace {

constexpr std::string_view kMelMagic = "W2SC-MEL1";

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate,
                             double f_min, double f_max)
    : bands_(n_mels),
      bins_(n_fft / 2 + 1),
      n_fft_(n_fft),
      sample_rate_(sample_rate),
      f_min_(f_min),
      f_max_(f_max) {
  if (n_mels == 0 || n_fft < 2 || sample_rate <= 0) {
    throw InvalidArgument("mel filterbank: sizes and sample rate must be positive");
  }
  if (f_min < 0.0 || f_max <= f_min || f_max > sample_rate / 2.0) {
    throw InvalidArgument("mel filterbank: need 0 <= f_min < f_max <= sample_rate/2");
  }
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }
  weights_.assign(bands_ * bins_, 0.0);
  centers_.resize(bands_);
  for (std::size_t b = 0; b < bands_; ++b) {
    const double lo = edges[b];
    const double mid = edges[b + 1];
    const double hi = edges[b + 2];
    centers_[b] = mid;
    bool any = false;
    for (std::size_t k = 0; k < bins_; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      const double w = std::max(0.0, std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid)));
      weights_[b * bins_ + k] = w;
      any = any || w > 0.0;
    }
    if (!any) {
      throw InvalidArgument("mel filterbank: band " + std::to_string(b) +
                            " covers no FFT bin; use fewer bands or a larger n_fft");
    }
  }
}

MelSpectrogram mel_from_magnitude(const Magnitude& mag, const MelFilterbank& fb,
                                  double log_floor) {
  if (mag.bins != fb.bins()) throw ShapeError("mel: filterbank does not match n_fft");
  const Eigen::Map<const RowMatrix> s(mag.data.data(), static_cast<Eigen::Index>(mag.frames),
                                      static_cast<Eigen::Index>(mag.bins));
  const Eigen::Map<const RowMatrix> w(fb.weights().data(), static_cast<Eigen::Index>(fb.bands()),
                                      static_cast<Eigen::Index>(fb.bins()));
  const RowMatrix mel = s * w.transpose();
  MelSpectrogram out;
  out.frames = mag.frames;
  out.bands = fb.bands();
  out.data.resize(out.frames * out.bands);
  for (Eigen::Index i = 0; i < mel.size(); ++i) {
    out.data[static_cast<std::size_t>(i)] =
        static_cast<float>(std::log(std::max(mel.data()[i], log_floor)));
  }
  return out;
}

MelSpectrogram mel_spectrogram(const Waveform& w, const MelFilterbank& fb,
                               const MelConfig& config) {
  if (config.stft.n_fft != fb.n_fft()) throw ShapeError("mel: filterbank does not match n_fft");
  return mel_from_magnitude(magnitude(stft(w.samples, config.stft)), fb, config.log_floor);
}

NormStats compute_norm_stats(std::span<const MelSpectrogram> corpus) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (const auto& m : corpus) {
    if (m.norm) throw InvalidArgument("norm stats: spectrogram is already normalized");
    for (float v : m.data) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) throw InvalidArgument("norm stats: empty corpus");
  // A constant corpus still needs a non-degenerate range.
  if (hi - lo < 1e-6f) hi = lo + 1.0f;
  return {lo, hi};
}

MelSpectrogram normalize(const MelSpectrogram& m, const NormStats& stats) {
  if (m.norm) throw InvalidArgument("normalize: spectrogram is already normalized");
  if (!(stats.max > stats.min)) throw InvalidArgument("normalize: degenerate statistics");
  MelSpectrogram out = m;
  const float scale = 2.0f / (stats.max - stats.min);
  for (float& v : out.data) v = std::clamp((v - stats.min) * scale - 1.0f, -1.0f, 1.0f);
  out.norm = stats;
  return out;
}

MelSpectrogram denormalize(const MelSpectrogram& m) {
  if (!m.norm) return m;
  MelSpectrogram out = m;
  const NormStats s = *m.norm;
  const float half_range = 0.5f * (s.max - s.min);
  for (float& v : out.data) v = (v + 1.0f) * half_range + s.min;
  out.norm.reset();
  return out;
}

MelInverter::MelInverter(const MelFilterbank& fb, double ridge)
    : bands_(fb.bands()), bins_(fb.bins()) {
  if (ridge <= 0.0) throw InvalidArgument("mel inversion: ridge must be positive");
  const Eigen::Map<const RowMatrix> w(fb.weights().data(), static_cast<Eigen::Index>(bands_),
                                      static_cast<Eigen::Index>(bins_));
  Eigen::MatrixXd gram = w.transpose() * w;
  gram.diagonal().array() += ridge;
  const RowMatrix pinv = gram.ldlt().solve(w.transpose());
  pinv_.assign(pinv.data(), pinv.data() + pinv.size());
}

Magnitude MelInverter::invert_linear(std::span<const double> mel, std::size_t frames) const {
  if (mel.size() != frames * bands_) throw ShapeError("mel inversion: band count mismatch");
  const Eigen::Map<const RowMatrix> m(mel.data(), static_cast<Eigen::Index>(frames),
                                      static_cast<Eigen::Index>(bands_));
  const Eigen::Map<const RowMatrix> p(pinv_.data(), static_cast<Eigen::Index>(bins_),
                                      static_cast<Eigen::Index>(bands_));
  const RowMatrix lin = (m * p.transpose()).cwiseMax(0.0);
  Magnitude out;
  out.frames = frames;
  out.bins = bins_;
  out.data.assign(lin.data(), lin.data() + lin.size());
  return out;
}

Magnitude MelInverter::invert(const MelSpectrogram& m) const {
  const MelSpectrogram logm = denormalize(m);
  if (logm.bands != bands_) throw ShapeError("mel inversion: band count mismatch");
  std::vector<double> lin(logm.data.size());
  std::transform(logm.data.begin(), logm.data.end(), lin.begin(),
                 [](float v) { return std::exp(static_cast<double>(v)); });
  return invert_linear(lin, logm.frames);
}

void save_mel(const std::filesystem::path& path, const MelSpectrogram& m) {
  if (m.data.size() != m.frames * m.bands) throw ShapeError("save_mel: inconsistent size");
  detail::ByteWriter w;
  w.bytes(kMelMagic);
  w.u32(static_cast<std::uint32_t>(m.frames));
  w.u32(static_cast<std::uint32_t>(m.bands));
  for (float v : m.data) w.f32(v);
  const NormStats stats = m.norm.value_or(NormStats{0.0f, 0.0f});
  w.f32(stats.min);
  w.f32(stats.max);
  detail::write_file(path.string(), w.buffer());
}

MelSpectrogram load_mel(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path.string());
  detail::ByteReader<IoError> r(bytes, "mel file " + path.string());
  if (r.bytes(kMelMagic.size()) != kMelMagic) {
    throw IoError("mel file " + path.string() + ": bad magic");
  }
  MelSpectrogram m;
  m.frames = r.u32();
  m.bands = r.u32();
  if (r.remaining() != (m.frames * m.bands + 2) * 4) {
    throw IoError("mel file " + path.string() + ": size does not match header");
  }
  m.data.resize(m.frames * m.bands);
  for (float& v : m.data) v = r.f32();
  const NormStats stats{r.f32(), r.f32()};
  if (stats.min != 0.0f || stats.max != 0.0f) m.norm = stats;
  return m;
}

}  // namespace w2sc::signal
