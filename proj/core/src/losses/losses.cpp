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
#include "w2sc/losses/losses.hpp"

#include <cmath>

#include "w2sc/error.hpp"

namespace w2sc::losses {

template <typename T>
Tensor<T> transformation_vectors(Tape<T>& tape, const Tensor<T>& embeddings,
                                 const PairIndices& pairs) {
  if (pairs.first.size() != pairs.second.size()) {
    throw InvalidArgument("transformation_vectors: pair index lists differ in length");
  }
  Tensor<T> e1 = ad::gather_rows<T>(tape, embeddings, pairs.first);
  Tensor<T> e2 = ad::gather_rows<T>(tape, embeddings, pairs.second);
  return ad::sub(tape, e1, e2);
}

double cosine_pi(std::span<const double> t, std::span<const double> t_prime, bool* degenerate) {
  if (t.size() != t_prime.size()) throw ShapeError("cosine_pi: dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    dot += t[i] * t_prime[i];
    na += t[i] * t[i];
    nb += t_prime[i] * t_prime[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  const bool flat = na < kCosineEps || nb < kCosineEps;
  if (degenerate != nullptr) *degenerate = flat;
  return flat ? 0.0 : dot / (na * nb);
}

template <typename T>
TransformLoss<T> siamese_transform_loss(Tape<T>& tape, const Tensor<T>& t, const Tensor<T>& t_prime,
                                        bool literal) {
  std::vector<bool> flat;
  Tensor<T> cos = ad::cosine_similarity_rows(tape, t, t_prime, static_cast<T>(kCosineEps), &flat);
  Tensor<T> cos_term = literal ? cos : ad::add_scalar(tape, ad::scale(tape, cos, T(-1)), T(1));
  Tensor<T> dist = ad::l2sq_rows(tape, ad::sub(tape, t, t_prime));
  Tensor<T> rows = ad::add(tape, cos_term, dist);

  TransformLoss<T> out;
  std::vector<T> mask(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    mask[i] = flat[i] ? T(0) : T(1);
    out.degenerate_pairs += flat[i] ? 1 : 0;
  }
  const std::size_t kept = flat.size() - out.degenerate_pairs;
  if (kept == 0) {
    out.loss = Tensor<T>::scalar(T(0));
    return out;
  }
  if (out.degenerate_pairs > 0) rows = ad::mul(tape, rows, Tensor<T>({flat.size()}, std::move(mask)));
  out.loss = ad::scale(tape, ad::sum(tape, rows), T(1) / static_cast<T>(kept));
  return out;
}

template <typename T>
Tensor<T> siamese_margin_loss(Tape<T>& tape, const Tensor<T>& t, T delta) {
  Tensor<T> norms = ad::norm_rows(tape, t);
  return ad::mean(tape, ad::relu(tape, ad::add_scalar(tape, ad::scale(tape, norms, T(-1)), delta)));
}

template <typename T>
Tensor<T> identity_loss(Tape<T>& tape, const Tensor<T>& g_of_b, const Tensor<T>& b) {
  return ad::mean(tape, ad::l1_rows(tape, ad::sub(tape, g_of_b, b)));
}

template <typename T>
Tensor<T> d_hinge_loss(Tape<T>& tape, const Tensor<T>& d_real, const Tensor<T>& d_fake) {
  Tensor<T> real = ad::mean(tape, ad::relu(tape, ad::add_scalar(tape, ad::scale(tape, d_real, T(-1)), T(1))));
  Tensor<T> fake = ad::mean(tape, ad::relu(tape, ad::add_scalar(tape, d_fake, T(1))));
  return ad::add(tape, real, fake);
}

template <typename T>
Tensor<T> g_adv_loss(Tape<T>& tape, const Tensor<T>& d_fake) {
  return ad::scale(tape, ad::mean(tape, d_fake), T(-1));
}

template <typename T>
TransformLoss<T> loss_siamese_transform(Tape<T>& tape, const Network<T>& g, const Network<T>& s,
                                        const Tensor<T>& a1, const Tensor<T>& a2, bool literal) {
  Tensor<T> t = ad::sub(tape, s(tape, a1), s(tape, a2));
  Tensor<T> tp = ad::sub(tape, s(tape, g(tape, a1)), s(tape, g(tape, a2)));
  return siamese_transform_loss(tape, t, tp, literal);
}

template <typename T>
Tensor<T> loss_siamese_margin(Tape<T>& tape, const Network<T>& s, const Tensor<T>& a1,
                              const Tensor<T>& a2, T delta) {
  return siamese_margin_loss(tape, ad::sub(tape, s(tape, a1), s(tape, a2)), delta);
}

template <typename T>
Tensor<T> loss_identity(Tape<T>& tape, const Network<T>& g, const Tensor<T>& b) {
  return identity_loss(tape, g(tape, b), b);
}

template <typename T>
Tensor<T> loss_d_hinge(Tape<T>& tape, const Network<T>& d, const Tensor<T>& b,
                       const Tensor<T>& fake) {
  return d_hinge_loss(tape, d(tape, b), d(tape, fake.detach()));
}

template <typename T>
Tensor<T> loss_g_adv(Tape<T>& tape, const Network<T>& d, const Tensor<T>& fake) {
  return g_adv_loss(tape, d(tape, fake));
}

template <typename T>
Tensor<T> total_generator_loss(Tape<T>& tape, const GeneratorLossTerms<T>& terms,
                               const LossWeights& w) {
  Tensor<T> out = ad::add(tape, terms.adv, ad::scale(tape, terms.transform, static_cast<T>(w.lambda_s)));
  return ad::add(tape, out, ad::scale(tape, terms.identity, static_cast<T>(w.lambda_id)));
}

template <typename T>
Tensor<T> total_siamese_loss(Tape<T>& tape, const GeneratorLossTerms<T>& terms,
                             const LossWeights& w) {
  return ad::add(tape, ad::scale(tape, terms.transform, static_cast<T>(w.lambda_s)), terms.margin);
}

template <typename T>
Tensor<T> joint_objective(Tape<T>& tape, const GeneratorLossTerms<T>& terms, const LossWeights& w) {
  return ad::add(tape, total_generator_loss(tape, terms, w), terms.margin);
}

#define W2SC_INSTANTIATE_LOSSES(T)                                                              \
  template Tensor<T> transformation_vectors(Tape<T>&, const Tensor<T>&, const PairIndices&);    \
  template TransformLoss<T> siamese_transform_loss(Tape<T>&, const Tensor<T>&,                  \
                                                   const Tensor<T>&, bool);                     \
  template Tensor<T> siamese_margin_loss(Tape<T>&, const Tensor<T>&, T);                        \
  template Tensor<T> identity_loss(Tape<T>&, const Tensor<T>&, const Tensor<T>&);               \
  template Tensor<T> d_hinge_loss(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                \
  template Tensor<T> g_adv_loss(Tape<T>&, const Tensor<T>&);                                    \
  template TransformLoss<T> loss_siamese_transform(Tape<T>&, const Network<T>&,                 \
                                                   const Network<T>&, const Tensor<T>&,         \
                                                   const Tensor<T>&, bool);                     \
  template Tensor<T> loss_siamese_margin(Tape<T>&, const Network<T>&, const Tensor<T>&,         \
                                         const Tensor<T>&, T);                                  \
  template Tensor<T> loss_identity(Tape<T>&, const Network<T>&, const Tensor<T>&);              \
  template Tensor<T> loss_d_hinge(Tape<T>&, const Network<T>&, const Tensor<T>&,                \
                                  const Tensor<T>&);                                            \
  template Tensor<T> loss_g_adv(Tape<T>&, const Network<T>&, const Tensor<T>&);                 \
  template Tensor<T> total_generator_loss(Tape<T>&, const GeneratorLossTerms<T>&,               \
                                          const LossWeights&);                                  \
  template Tensor<T> total_siamese_loss(Tape<T>&, const GeneratorLossTerms<T>&,                 \
                                        const LossWeights&);                                    \
  template Tensor<T> joint_objective(Tape<T>&, const GeneratorLossTerms<T>&, const LossWeights&);

W2SC_INSTANTIATE_LOSSES(float)
W2SC_INSTANTIATE_LOSSES(double)

#undef W2SC_INSTANTIATE_LOSSES

}  // namespace w2sc::losses
