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
#include "w2sc/nn/discriminator.hpp"

#include "check.hpp"
#include "w2sc/nn/generator.hpp"

namespace w2sc::nn {

namespace {
constexpr std::array<std::size_t, 5> kWidths{1, 64, 128, 256, 512};
// 128x12 halved four times (ceil) is 8x1.
constexpr std::size_t kFlat = 512 * 8 * 1;
}  // namespace

template <typename T>
Discriminator<T>::Discriminator() : fc(kFlat, 1) {
  for (std::size_t i = 0; i < kLayers; ++i)
    convs[i] = Conv2d<T>(kWidths[i], kWidths[i + 1], 3, 3, {2, 2}, Padding::kSame);
}

template <typename T>
Tensor<T> Discriminator<T>::forward(Tape<T>& tape, const Tensor<T>& x) const {
  detail::require_nchw(x.shape(), 1, kSegmentBands, kSegmentFrames, "discriminator input");
  Tensor<T> h = x;
  for (std::size_t i = 0; i < kLayers; ++i) {
    Tensor<T> w = norms[i].normalize(tape, convs[i].weight);
    h = lrelu(tape, ad::conv2d(tape, h, w, convs[i].bias, convs[i].stride, convs[i].padding));
  }
  const std::size_t n = x.dim(0);
  Tensor<T> flat = ad::reshape(tape, h, {n, h.size() / n});
  return ad::reshape(tape, fc(tape, flat), {n});
}

template <typename T>
void Discriminator<T>::refresh_spectral_norm(int iterations) {
  for (std::size_t i = 0; i < kLayers; ++i) norms[i].power_iteration(convs[i].weight, iterations);
}

template <typename T>
TensorList<T> Discriminator<T>::parameters() const {
  TensorList<T> out;
  for (std::size_t i = 0; i < kLayers; ++i)
    ad::append_prefixed(out, "conv" + std::to_string(i + 1), convs[i].parameters());
  ad::append_prefixed(out, "fc", fc.parameters());
  return out;
}

template <typename T>
TensorList<T> Discriminator<T>::buffers() const {
  TensorList<T> out;
  for (std::size_t i = 0; i < kLayers; ++i) {
    const std::string name = "conv" + std::to_string(i + 1);
    out.push_back({name + ".u", norms[i].u()});
    out.push_back({name + ".v", norms[i].v()});
  }
  return out;
}

template <typename T>
void Discriminator<T>::init(std::mt19937_64& rng, double stddev) {
  ad::init_normal(parameters(), rng, stddev);
  for (std::size_t i = 0; i < kLayers; ++i) {
    const auto& w = convs[i].weight;
    norms[i] = ad::SpectralNorm<T>(w.dim(0), w.size() / w.dim(0), rng);
  }
}

template class Discriminator<float>;
template class Discriminator<double>;

}  // namespace w2sc::nn
