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
#include "w2sc/tensor/spectral_norm.hpp"

#include <Eigen/Core>
#include <cmath>

#include "w2sc/error.hpp"

namespace w2sc::ad {
namespace {

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using CMat = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

template <typename T>
void normalize_into(const Vec<T>& x, Tensor<T>& out) {
  const T n = std::max(x.norm(), T(1e-12));
  Eigen::Map<Vec<T>>(out.data(), x.size()) = x / n;
}

template <typename T>
CMat<T> as_matrix(const Tensor<T>& w, std::size_t rows, std::size_t cols) {
  if (w.rank() == 0 || w.dim(0) != rows || w.size() != rows * cols) {
    throw ShapeError("spectral_norm: weight " + shape_string(w.shape()) +
                     " does not match state " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  return CMat<T>(w.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

}  // namespace

template <typename T>
SpectralNorm<T>::SpectralNorm(std::size_t rows, std::size_t cols, std::mt19937_64& rng)
    : u_(Shape{rows}), v_(Shape{cols}) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec<T> a(static_cast<Eigen::Index>(rows));
  Vec<T> b(static_cast<Eigen::Index>(cols));
  for (auto& x : a) x = static_cast<T>(dist(rng));
  for (auto& x : b) x = static_cast<T>(dist(rng));
  normalize_into(a, u_);
  normalize_into(b, v_);
}

template <typename T>
void SpectralNorm<T>::power_iteration(const Tensor<T>& weight, int iterations) {
  const auto w = as_matrix(weight, u_.size(), v_.size());
  Eigen::Map<const Vec<T>> u(u_.data(), w.rows());
  for (int i = 0; i < iterations; ++i) {
    normalize_into<T>(w.transpose() * u, v_);
    Eigen::Map<const Vec<T>> v(v_.data(), w.cols());
    normalize_into<T>(w * v, u_);
  }
}

template <typename T>
T SpectralNorm<T>::sigma(const Tensor<T>& weight) const {
  const auto w = as_matrix(weight, u_.size(), v_.size());
  Eigen::Map<const Vec<T>> u(u_.data(), w.rows());
  Eigen::Map<const Vec<T>> v(v_.data(), w.cols());
  return u.dot(w * v);
}

template <typename T>
Tensor<T> SpectralNorm<T>::normalize(Tape<T>& tape, const Tensor<T>& weight,
                                     bool* degenerate) const {
  const T s = sigma(weight);
  const bool flat = !(s > T(0)) || !std::isfinite(s);
  if (degenerate != nullptr) *degenerate = flat;
  if (flat) return weight;
  return divide_by_bilinear<T>(tape, weight, u_.values(), v_.values());
}

template class SpectralNorm<float>;
template class SpectralNorm<double>;

}  // namespace w2sc::ad
