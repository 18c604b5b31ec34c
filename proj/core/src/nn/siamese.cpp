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
#include "w2sc/nn/siamese.hpp"

#include "check.hpp"
#include "w2sc/nn/generator.hpp"

namespace w2sc::nn {

namespace {
constexpr std::array<std::size_t, 4> kWidths{1, 32, 64, 128};
// 128x12 halved three times (ceil) is 16x2.
constexpr std::size_t kFlat = 128 * 16 * 2;
}  // namespace

template <typename T>
Siamese<T>::Siamese() : fc(kFlat, kEmbedding) {
  for (std::size_t i = 0; i < convs.size(); ++i)
    convs[i] = Conv2d<T>(kWidths[i], kWidths[i + 1], 3, 3, {2, 2}, Padding::kSame);
}

template <typename T>
Tensor<T> Siamese<T>::forward(Tape<T>& tape, const Tensor<T>& x) const {
  detail::require_nchw(x.shape(), 1, kSegmentBands, kSegmentFrames, "siamese input");
  Tensor<T> h = x;
  for (const auto& c : convs) h = lrelu(tape, c(tape, h));
  const std::size_t n = x.dim(0);
  return fc(tape, ad::reshape(tape, h, {n, h.size() / n}));
}

template <typename T>
TensorList<T> Siamese<T>::parameters() const {
  TensorList<T> out;
  for (std::size_t i = 0; i < convs.size(); ++i)
    ad::append_prefixed(out, "conv" + std::to_string(i + 1), convs[i].parameters());
  ad::append_prefixed(out, "fc", fc.parameters());
  return out;
}

template <typename T>
void Siamese<T>::init(std::mt19937_64& rng, double stddev) {
  ad::init_normal(parameters(), rng, stddev);
}

template class Siamese<float>;
template class Siamese<double>;

}  // namespace w2sc::nn
