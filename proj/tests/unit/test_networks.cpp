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
#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "grad_cases.hpp"
#include "oracles.hpp"
#include "w2sc/error.hpp"
#include "w2sc/nn/discriminator.hpp"
#include "w2sc/nn/generator.hpp"
#include "w2sc/nn/siamese.hpp"
#include "w2sc/tensor/ops.hpp"

namespace w2sc::nn {
namespace {

using TF = ad::Tensor<float>;
using Tape = ad::Tape<float>;

TF random_batch(std::size_t n, std::mt19937_64& rng) {
  TF x({n, 1, 128, 12});
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (float& v : x.values()) v = u(rng);
  return x;
}

TEST(Attention, MapRowsSumToOneAndShapes) {
  std::mt19937_64 rng(1);
  Generator<float> g;
  g.init(rng);
  g.attention.gamma.values()[0] = 0.5f;
  TF x({1, 64, 128, 12});
  std::normal_distribution<float> d;
  for (float& v : x.values()) v = d(rng);
  Tape tape(Tape::Mode::kNoGrad);
  TF beta;
  const TF y = g.attention.forward(tape, x, nullptr, &beta);
  EXPECT_EQ(y.shape(), (ad::Shape{1, 64, 128, 12}));
  ASSERT_EQ(beta.shape(), (ad::Shape{1, 1536, 1536}));
  for (std::size_t i = 0; i < 1536; i += 97) {
    double s = 0.0;
    for (std::size_t j = 0; j < 1536; ++j) s += beta.values()[i * 1536 + j];
    EXPECT_NEAR(s, 1.0, 1e-5);
  }
}

TEST(Attention, ClosedGateIsIdentity) {
  std::mt19937_64 rng(2);
  Generator<float> g;
  g.init(rng);
  ASSERT_EQ(g.attention.gamma.values()[0], 0.0f);
  TF x({2, 64, 128, 12});
  std::normal_distribution<float> d;
  for (float& v : x.values()) v = d(rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF y = g.attention.forward(tape, x);
  for (std::size_t i = 0; i < x.size(); ++i) ASSERT_EQ(y.values()[i], x.values()[i]);
}

TEST(Generator, SegmentShapeAndBound) {
  std::mt19937_64 rng(3);
  Generator<float> g;
  g.init(rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF y = g.forward(tape, random_batch(2, rng));
  EXPECT_EQ(y.shape(), (ad::Shape{2, 1, 128, 12}));
  for (float v : y.values()) {
    EXPECT_GE(v, -1.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(Generator, ZeroGammaEqualsNoAttention) {
  std::mt19937_64 rng(4);
  Generator<float> g;
  g.init(rng);
  const TF x = random_batch(2, rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF a = g.forward(tape, x, nullptr, true);
  const TF b = g.forward(tape, x, nullptr, false);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.values()[i], b.values()[i]);
}

TEST(Generator, NoCouplingAcrossBatch) {
  std::mt19937_64 rng(5);
  Generator<float> g;
  g.init(rng, 0.05);
  g.attention.gamma.values()[0] = 0.5f;
  TF x = random_batch(3, rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF before = g.forward(tape, x);
  TF zeroed = x.clone();
  std::fill_n(zeroed.data() + 1536, 1536, 0.0f);
  const TF after = g.forward(tape, zeroed);
  bool changed = false;
  for (std::size_t n = 0; n < 3; ++n) {
    for (std::size_t i = 0; i < 1536; ++i) {
      const float a = before.values()[n * 1536 + i], b = after.values()[n * 1536 + i];
      if (n == 1) {
        changed |= a != b;
      } else {
        ASSERT_EQ(a, b) << "segment " << n;
      }
    }
  }
  EXPECT_TRUE(changed);
}

TEST(Generator, EveryParameterGetsGradient) {
  std::mt19937_64 rng(6);
  Generator<float> g;
  g.init(rng, 0.05);
  g.attention.gamma.values()[0] = 0.3f;
  Tape tape;
  const TF y = g.forward(tape, random_batch(2, rng));
  tape.backward(ad::sum(tape, ad::mul(tape, y, random_batch(2, rng))));
  for (const auto& p : g.parameters()) {
    ASSERT_TRUE(p.tensor.has_grad()) << p.name;
    bool nonzero = false;
    for (float v : p.tensor.grad()) nonzero |= v != 0.0f;
    EXPECT_TRUE(nonzero) << p.name;
  }
}

TEST(Generator, WrongShapeNamesStage) {
  Generator<float> g;
  Tape tape(Tape::Mode::kNoGrad);
  try {
    g.forward(tape, TF({1, 1, 64, 12}));
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("generator input"), std::string::npos) << e.what();
  }
}

TEST(Discriminator, ScorePerSegmentAndFinalLayerHomogeneity) {
  std::mt19937_64 rng(7);
  Discriminator<float> d;
  d.init(rng);
  std::normal_distribution<float> n(0.0f, 0.3f);
  for (float& v : d.fc.bias.values()) v = n(rng);
  d.refresh_spectral_norm(1);
  const TF x = random_batch(4, rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF s1 = d.forward(tape, x);
  ASSERT_EQ(s1.shape(), (ad::Shape{4}));
  for (float& v : d.fc.weight.values()) v *= 2.0f;
  for (float& v : d.fc.bias.values()) v *= 2.0f;
  const TF s2 = d.forward(tape, x);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s2.values()[i], 2.0f * s1.values()[i], 1e-6f * (1 + std::abs(s1.values()[i])));
}

TEST(Discriminator, ConvolutionsAreSpectrallyNormalized) {
  std::mt19937_64 rng(8);
  Discriminator<float> d;
  d.init(rng);
  // Scaling a conv weight leaves the normalized network unchanged.
  d.refresh_spectral_norm(1);
  const TF x = random_batch(2, rng);
  Tape tape(Tape::Mode::kNoGrad);
  const TF a = d.forward(tape, x);
  for (float& v : d.convs[1].weight.values()) v *= 4.0f;
  const TF b = d.forward(tape, x);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-5f * (1 + std::abs(a.values()[i])));
}

TEST(Siamese, EmbeddingContract) {
  std::mt19937_64 rng(9);
  Siamese<float> s;
  s.init(rng);
  TF x = random_batch(1, rng);
  TF twice({2, 1, 128, 12});
  std::copy_n(x.data(), 1536, twice.data());
  std::copy_n(x.data(), 1536, twice.data() + 1536);
  Tape tape(Tape::Mode::kNoGrad);
  const TF e = s.forward(tape, twice);
  ASSERT_EQ(e.shape(), (ad::Shape{2, 128}));
  // Batched GEMM may block rows differently, so equality is to rounding.
  for (std::size_t i = 0; i < 128; ++i) EXPECT_NEAR(e.values()[i], e.values()[128 + i], 1e-6f);
}

TEST(GradCheck, Networks) {
  for (const auto& c : testing::network_grad_cases()) {
    std::mt19937_64 rng(99);
    const auto p = c.make(rng);
    const auto r = testing::check_gradients(p.forward, p.inputs, rng, p.max_per_tensor);
    EXPECT_LT(r.max_rel_error, 1e-4) << c.name << ": " << r.worst;
    EXPECT_LE(r.skipped * 4, r.checked) << c.name << ": too many kink skips";
  }
}

}  // namespace
}  // namespace w2sc::nn
