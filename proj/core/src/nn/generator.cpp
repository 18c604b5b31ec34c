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
#include "w2sc/nn/generator.hpp"

#include <array>

#include "check.hpp"

namespace w2sc::nn {

namespace {
constexpr std::size_t kHidden = 64;
constexpr std::size_t kWide = 256;
}  // namespace

template <typename T>
Generator<T>::Generator()
    : conv1(1, kHidden, 3, 3, {1, 1}, Padding::kSame),
      down1(kHidden, kWide, kSegmentBands, 3),
      down2(kWide, kWide, 1, 9, {1, 2}, Padding::kSame),
      down3(kWide, kWide, 1, 7, {1, 2}, Padding::kSame),
      up1(kWide, kWide, 1, 7, {1, 2}, Padding::kSame),
      up2(2 * kWide, kWide, 1, 9, {1, 2}, Padding::kSame),
      up3(2 * kWide, 1, kSegmentBands, 1) {}

template <typename T>
Tensor<T> Generator<T>::forward(Tape<T>& tape, const Tensor<T>& x, GeneratorTrace* trace,
                                bool use_attention) const {
  detail::require_nchw(x.shape(), 1, kSegmentBands, kSegmentFrames, "generator input");
  auto row = [&](const char* layer, std::string kernel, std::vector<std::string> inputs,
                 const Tensor<T>& out) {
    if (trace != nullptr)
      trace->layers.push_back({layer, std::move(kernel), std::move(inputs), feature_map_string(out.shape())});
  };
  auto fm = [](const Tensor<T>& t) { return feature_map_string(t.shape()); };
  auto kern = [](const Tensor<T>& w) { return kernel_string(w.dim(2), w.dim(3)); };

  Tensor<T> c1 = detail::stage("Encoder-conv1", [&] { return lrelu(tape, conv1(tape, x)); });
  row("Encoder-conv1", kern(conv1.weight), {fm(x)}, c1);
  if (trace != nullptr) trace->attention.push_back({"Conv1", kern(conv1.weight), {fm(x)}, fm(c1)});

  Tensor<T> a = c1;
  if (use_attention) {
    a = detail::stage("Encoder-self-attention", [&] {
      return attention.forward(tape, c1, trace != nullptr ? &trace->attention : nullptr);
    });
  }
  row("Encoder-self-attention", "", {fm(c1)}, a);

  Tensor<T> padded = detail::stage("Encoder-padding", [&] { return ad::pad2d(tape, a, {0, 0, 1, 1}); });
  row("Encoder-padding", "", {fm(a)}, padded);

  Tensor<T> e1 = detail::stage("Encoder-downsample1", [&] { return lrelu(tape, down1(tape, padded)); });
  row("Encoder-downsample", kern(down1.weight), {fm(padded)}, e1);
  Tensor<T> e2 = detail::stage("Encoder-downsample2", [&] { return lrelu(tape, down2(tape, e1)); });
  row("Encoder-downsample", kern(down2.weight), {fm(e1)}, e2);
  Tensor<T> e3 = detail::stage("Encoder-downsample3", [&] { return lrelu(tape, down3(tape, e2)); });
  row("Encoder-downsample", kern(down3.weight), {fm(e2)}, e3);

  Tensor<T> s1 = detail::stage("Decoder-upsample1", [&] {
    const std::array<Tensor<T>, 2> parts{lrelu(tape, up1(tape, e3)), e2};
    return ad::concat_channels<T>(tape, parts);
  });
  row("Decoder-upsample", kern(up1.weight), {fm(e2), fm(e3)}, s1);
  Tensor<T> s2 = detail::stage("Decoder-upsample2", [&] {
    const std::array<Tensor<T>, 2> parts{lrelu(tape, up2(tape, s1)), e1};
    return ad::concat_channels<T>(tape, parts);
  });
  row("Decoder-upsample", kern(up2.weight), {fm(s1), fm(e1)}, s2);
  Tensor<T> y = detail::stage("Decoder-upsample3", [&] { return ad::tanh(tape, up3(tape, s2)); });
  row("Decoder-upsample", kern(up3.weight), {fm(s2)}, y);
  detail::require_nchw(y.shape(), 1, kSegmentBands, kSegmentFrames, "generator output");
  return y;
}

template <typename T>
TensorList<T> Generator<T>::parameters() const {
  TensorList<T> out;
  ad::append_prefixed(out, "conv1", conv1.parameters());
  ad::append_prefixed(out, "attention", attention.parameters());
  ad::append_prefixed(out, "down1", down1.parameters());
  ad::append_prefixed(out, "down2", down2.parameters());
  ad::append_prefixed(out, "down3", down3.parameters());
  ad::append_prefixed(out, "up1", up1.parameters());
  ad::append_prefixed(out, "up2", up2.parameters());
  ad::append_prefixed(out, "up3", up3.parameters());
  return out;
}

template <typename T>
void Generator<T>::init(std::mt19937_64& rng, double stddev) {
  ad::init_normal(parameters(), rng, stddev);
  // gamma has rank 1 and is therefore zeroed: the residual gate starts closed.
}

template class Generator<float>;
template class Generator<double>;

}  // namespace w2sc::nn
