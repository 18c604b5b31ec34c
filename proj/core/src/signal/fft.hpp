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

namespace w2sc::signal::detail {

/// Real-input FFT of a fixed size backed by FFTW. Plans are created with
/// FFTW_ESTIMATE so results are reproducible run to run. Instances are
/// immutable after construction and may be shared across threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }

  /// in: n reals, out: n/2 + 1 bins.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// in: n/2 + 1 bins, out: n reals, scaled by 1/n (a true inverse).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Process-wide cache of plans keyed by size.
const RealFft& fft_for_size(std::size_t n);

}  // namespace w2sc::signal::detail
