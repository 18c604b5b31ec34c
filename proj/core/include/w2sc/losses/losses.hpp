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
#include <functional>
#include <span>
#include <utility>

#include "w2sc/tensor/ops.hpp"

namespace w2sc::losses {

using ad::Tape;
using ad::Tensor;

struct LossWeights {
  double lambda_s = 10.0;   // Siamese transformation term
  double lambda_id = 5.0;   // identity mapping term
  double delta = 1.0;       // Siamese margin
  /// Adds the cosine similarity instead of (1 - cosine) in the
  /// transformation term.
  bool literal_cosine = false;
};

/// Forward pass of a network on a batch.
template <typename T>
using Network = std::function<Tensor<T>(Tape<T>&, const Tensor<T>&)>;

/// Index pairs (first, second) into a batch.
struct PairIndices {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::size_t size() const { return first.size(); }
};

/// Norms below this make a cosine pair degenerate.
inline constexpr double kCosineEps = 1e-8;

/// Rows emb[first[k]] - emb[second[k]] of a [N, D] embedding -> [K, D].
template <typename T>
Tensor<T> transformation_vectors(Tape<T>& tape, const Tensor<T>& embeddings,
                                 const PairIndices& pairs);

/// dot(t, t') / (|t| |t'|); 0 with \p degenerate set when either norm is
/// below kCosineEps.
double cosine_pi(std::span<const double> t, std::span<const double> t_prime,
                 bool* degenerate = nullptr);

template <typename T>
struct TransformLoss {
  Tensor<T> loss;
  std::size_t degenerate_pairs = 0;
};

/// Mean over non-degenerate rows of (1 - pi(t, t')) + |t - t'|^2 (or
/// pi + |t - t'|^2 when literal). t, t': [K, D].
template <typename T>
TransformLoss<T> siamese_transform_loss(Tape<T>& tape, const Tensor<T>& t, const Tensor<T>& t_prime,
                                        bool literal = false);

/// Mean over rows of max(0, delta - |t|).
template <typename T>
Tensor<T> siamese_margin_loss(Tape<T>& tape, const Tensor<T>& t, T delta);

/// Mean over the batch of the per-segment L1 distance |G(b) - b|_1.
template <typename T>
Tensor<T> identity_loss(Tape<T>& tape, const Tensor<T>& g_of_b, const Tensor<T>& b);

/// mean(max(0, 1 - D(b))) + mean(max(0, 1 + D(fake))).
template <typename T>
Tensor<T> d_hinge_loss(Tape<T>& tape, const Tensor<T>& d_real, const Tensor<T>& d_fake);

/// -mean(D(fake)).
template <typename T>
Tensor<T> g_adv_loss(Tape<T>& tape, const Tensor<T>& d_fake);

/// Network-level forms: each runs the networks it needs on the given batches.
template <typename T>
TransformLoss<T> loss_siamese_transform(Tape<T>& tape, const Network<T>& g, const Network<T>& s,
                                        const Tensor<T>& a1, const Tensor<T>& a2,
                                        bool literal = false);
template <typename T>
Tensor<T> loss_siamese_margin(Tape<T>& tape, const Network<T>& s, const Tensor<T>& a1,
                              const Tensor<T>& a2, T delta);
template <typename T>
Tensor<T> loss_identity(Tape<T>& tape, const Network<T>& g, const Tensor<T>& b);
template <typename T>
Tensor<T> loss_d_hinge(Tape<T>& tape, const Network<T>& d, const Tensor<T>& b,
                       const Tensor<T>& fake);
template <typename T>
Tensor<T> loss_g_adv(Tape<T>& tape, const Network<T>& d, const Tensor<T>& fake);

template <typename T>
struct GeneratorLossTerms {
  Tensor<T> adv;
  Tensor<T> transform;
  Tensor<T> margin;
  Tensor<T> identity;
};

/// L_adv + lambda_S * L_GS + lambda_id * L_id.
template <typename T>
Tensor<T> total_generator_loss(Tape<T>& tape, const GeneratorLossTerms<T>& terms,
                               const LossWeights& w);

/// lambda_S * L_GS + L_S.
template <typename T>
Tensor<T> total_siamese_loss(Tape<T>& tape, const GeneratorLossTerms<T>& terms,
                             const LossWeights& w);

/// Single objective whose gradient gives G the generator loss and S the
/// Siamese loss: L_adv + lambda_S * L_GS + lambda_id * L_id + L_S. S does not
/// appear in L_adv or L_id, and G does not appear in L_S.
template <typename T>
Tensor<T> joint_objective(Tape<T>& tape, const GeneratorLossTerms<T>& terms, const LossWeights& w);

}  // namespace w2sc::losses
