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
#include "w2sc/eval/metrics.hpp"

#include <cmath>
#include <numbers>

#include "w2sc/error.hpp"

namespace w2sc::eval {

AlignedF0 align_f0(const F0Track& c, const F0Track& t, const AlignmentPath& path,
                   const std::vector<bool>& reference_silent) {
  if (!reference_silent.empty() && reference_silent.size() != t.size())
    throw InvalidArgument("align_f0: silence mask length differs from the reference track");
  AlignedF0 out;
  for (const auto& [i, j] : path.pairs) {
    if (i >= c.size() || j >= t.size()) throw InvalidArgument("align_f0: path leaves the tracks");
    out.converted.push_back(c.f0[i]);
    out.reference.push_back(t.f0[j]);
    out.reference_silent.push_back(!reference_silent.empty() && reference_silent[j]);
  }
  return out;
}

RmseResult rmse_f0(std::span<const double> converted, std::span<const double> reference,
                   RmseVariant variant, const std::vector<bool>& reference_silent) {
  if (converted.size() != reference.size())
    throw InvalidArgument("rmse_f0: aligned tracks differ in length");
  if (!reference_silent.empty() && reference_silent.size() != reference.size())
    throw InvalidArgument("rmse_f0: silence mask length differs from the tracks");
  RmseResult r;
  double sum = 0.0;
  for (std::size_t k = 0; k < converted.size(); ++k) {
    if (variant == RmseVariant::kProcessed) {
      if (reference[k] <= 0.0) continue;
      if (!reference_silent.empty() && reference_silent[k]) continue;
    }
    const double d = converted[k] - reference[k];
    sum += d * d;
    ++r.pairs;
  }
  if (r.pairs == 0) throw InvalidArgument("rmse_f0: no aligned pairs left");
  r.value = std::sqrt(sum);
  r.normalized = std::sqrt(sum / static_cast<double>(r.pairs));
  return r;
}

RmseResult rmse_f0(const AlignedF0& aligned, RmseVariant variant) {
  return rmse_f0(aligned.converted, aligned.reference, variant, aligned.reference_silent);
}

namespace {

// Cepstral basis: c_k = (1 / N) sum_n x_n cos(pi k (n + 1/2) / N), the
// cosine series of the log-mel envelope.
double basis(std::size_t k, std::size_t i, std::size_t n) {
  return std::cos(std::numbers::pi * static_cast<double>(k) * (static_cast<double>(i) + 0.5) /
                  static_cast<double>(n)) /
         static_cast<double>(n);
}

}  // namespace

std::vector<double> mel_cepstrum(std::span<const float> log_mel) {
  const std::size_t n = log_mel.size();
  if (n == 0) throw InvalidArgument("mel_cepstrum: empty frame");
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) c[k] += basis(k, i, n) * log_mel[i];
  }
  return c;
}

namespace {

// Cepstra c1..c24 of every frame.
std::vector<double> cepstra(const signal::MelSpectrogram& m) {
  if (m.bands <= kMcdOrder) throw InvalidArgument("mel_cepstral_distortion: too few mel bands");
  const std::size_t n = m.bands;
  std::vector<double> table(kMcdOrder * n);
  for (std::size_t k = 1; k <= kMcdOrder; ++k)
    for (std::size_t i = 0; i < n; ++i) table[(k - 1) * n + i] = basis(k, i, n);
  std::vector<double> out(m.frames * kMcdOrder, 0.0);
  for (std::size_t t = 0; t < m.frames; ++t) {
    const auto f = m.frame(t);
    for (std::size_t k = 0; k < kMcdOrder; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += table[k * n + i] * f[i];
      out[t * kMcdOrder + k] = acc;
    }
  }
  return out;
}

}  // namespace

double mel_cepstral_distortion(const signal::MelSpectrogram& c, const signal::MelSpectrogram& t,
                               const AlignmentPath& path) {
  if (c.bands != t.bands) throw InvalidArgument("mel_cepstral_distortion: band counts differ");
  if (path.pairs.empty()) throw InvalidArgument("mel_cepstral_distortion: empty path");
  const auto cc = cepstra(c.norm ? signal::denormalize(c) : c);
  const auto ct = cepstra(t.norm ? signal::denormalize(t) : t);
  const double scale = 10.0 / std::numbers::ln10;
  double total = 0.0;
  for (const auto& [i, j] : path.pairs) {
    if (i >= c.frames || j >= t.frames)
      throw InvalidArgument("mel_cepstral_distortion: path leaves the spectrograms");
    double s = 0.0;
    for (std::size_t k = 0; k < kMcdOrder; ++k) {
      const double d = cc[i * kMcdOrder + k] - ct[j * kMcdOrder + k];
      s += d * d;
    }
    total += scale * std::sqrt(2.0 * s);
  }
  return total / static_cast<double>(path.pairs.size());
}

}  // namespace w2sc::eval
