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
#include "w2sc/nn/attention.hpp"

#include "check.hpp"

namespace w2sc::nn {

template <typename T>
SelfAttention<T>::SelfAttention()
    : f(kChannels, kKeyChannels, 1, 1),
      g(kChannels, kKeyChannels, 1, 1),
      h(kChannels, kValueChannels, 1, 1),
      o(kValueChannels, kChannels, 1, 1),
      gamma({1}, true) {}

template <typename T>
Tensor<T> SelfAttention<T>::forward(Tape<T>& tape, const Tensor<T>& x, ShapeTrace* trace,
                                    Tensor<T>* beta) const {
  if (x.rank() != 4 || x.dim(1) != kChannels || x.dim(0) == 0) {
    throw ShapeError("self-attention: expected [N, 64, H, W], got " + ad::shape_string(x.shape()));
  }
  const std::size_t n = x.dim(0), hh = x.dim(2), ww = x.dim(3);
  const std::size_t positions = hh * ww;
  const std::string kernel = kernel_string(1, 1);
  const std::string in_str = feature_map_string(x.shape());

  Tensor<T> fx = f(tape, x);
  Tensor<T> gx = g(tape, x);
  Tensor<T> hx = h(tape, x);
  const std::string region = "(" + std::to_string(hh) + "×" + std::to_string(ww) + ")";

  // [N, C, H, W] viewed as [N, C, HW]; f^T g contracts the channel axis and
  // the read-out beta h^T comes back channel-major as [N, 128, HW].
  Tensor<T> fm = ad::reshape(tape, fx, {n, kKeyChannels, positions});
  Tensor<T> gm = ad::reshape(tape, gx, {n, kKeyChannels, positions});
  Tensor<T> hm = ad::reshape(tape, hx, {n, kValueChannels, positions});
  Tensor<T> mixed = ad::attention_readout(tape, fm, gm, hm, beta);
  Tensor<T> maps = ad::reshape(tape, mixed, {n, kValueChannels, hh, ww});
  Tensor<T> ox = o(tape, maps);
  Tensor<T> y = ad::add(tape, x, ad::mul(tape, ox, gamma));

  if (trace != nullptr) {
    trace->push_back({"Conv2", kernel, {in_str}, feature_map_string(fx.shape())});
    trace->push_back({"Conv3", kernel, {in_str}, feature_map_string(gx.shape())});
    const std::string scores = matrix_string(positions, positions);
    const std::string readout = matrix_string(mixed.dim(2), mixed.dim(1));
    trace->push_back({"Matmul1",
                      "",
                      {region + "×" + std::to_string(fm.dim(1)), std::to_string(gm.dim(1)) + "×" + region},
                      scores});
    trace->push_back({"Softmax", "", {scores}, scores});
    trace->push_back({"Conv4", kernel, {in_str}, feature_map_string(hx.shape())});
    trace->push_back({"Matmul2", "", {scores, feature_map_string(hx.shape())}, readout});
    trace->push_back({"Reshape", "", {readout},
                      feature_map_string(maps.shape())});
    trace->push_back({"Conv5", kernel, {feature_map_string(maps.shape())},
                      feature_map_string(ox.shape())});
  }
  return y;
}

template <typename T>
TensorList<T> SelfAttention<T>::parameters() const {
  TensorList<T> out;
  ad::append_prefixed(out, "f", f.parameters());
  ad::append_prefixed(out, "g", g.parameters());
  ad::append_prefixed(out, "h", h.parameters());
  ad::append_prefixed(out, "o", o.parameters());
  out.push_back({"gamma", gamma});
  return out;
}

template class SelfAttention<float>;
template class SelfAttention<double>;

}  // namespace w2sc::nn
