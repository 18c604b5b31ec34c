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

#include <cstdint>
#include <functional>
#include <filesystem>
#include <optional>
#include <string>

#include "w2sc/nn/discriminator.hpp"
#include "w2sc/nn/generator.hpp"
#include "w2sc/nn/siamese.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/tensor/adam.hpp"
#include "w2sc/train/config.hpp"
#include "w2sc/train/corpus.hpp"

namespace w2sc::train {

/// Everything a run needs to continue bit-exactly: networks, optimizer
/// moments, spectral-norm vectors and the step counter. Batches are drawn
/// from a generator seeded by (seed, step), so no RNG state is stored.
struct TrainState {
  TrainConfig config;
  nn::Generator<float> g;
  nn::Discriminator<float> d;
  nn::Siamese<float> s;
  ad::Adam<float> opt_g;
  ad::Adam<float> opt_s;
  ad::Adam<float> opt_d;
  std::uint64_t step = 0;
  signal::NormStats whisper_norm;
  signal::NormStats normal_norm;
  std::string config_echo;

  std::uint64_t d_updates() const { return opt_d.steps(); }
};

/// Freshly initialized state; initialization draws from a generator seeded
/// by config.seed.
TrainState make_train_state(const TrainConfig& config);

struct StepReport {
  std::uint64_t step = 0;  // 1-based index of the completed step
  std::optional<double> loss_d;
  double loss_g_adv = 0;
  double loss_gs = 0;
  double loss_s = 0;
  double loss_id = 0;
  std::size_t degenerate_pairs = 0;
};

/// Whether the step with 1-based index \p step updates the discriminator.
bool is_d_step(std::uint64_t step, std::uint32_t g_steps_per_d_step);

/// Per-step generator seed derived from the run seed and the 0-based step.
std::uint64_t step_seed(std::uint64_t seed, std::uint64_t step);

/// One generator/Siamese update, plus a discriminator update on every
/// g_steps_per_d_step-th call. Throws NonFiniteError naming the loss term.
StepReport train_step(TrainState& state, const Batch& batch);

struct RunOptions {
  std::filesystem::path checkpoint_dir;  // empty: no checkpoints
  std::filesystem::path log_path;        // empty: no CSV log
  /// Stop after this many total steps (0: config.steps).
  std::uint64_t stop_at = 0;
  std::function<void(const StepReport&)> on_step;
};

/// CSV header of the loss log.
inline constexpr const char* kLossLogHeader = "step,L_D,L_G_adv,L_GS,L_S,L_id";
std::string format_log_row(const StepReport& r);

/// Runs train_step from state.step up to the budget, appending to the loss
/// log (header written when the log is new) and writing
/// "<dir>/step_NNNNNN.ckpt" every checkpoint_interval steps and at the end,
/// plus "<dir>/latest.ckpt". A zero budget writes the initial checkpoint.
void run_training(TrainState& state, const SegmentPool& whisper, const SegmentPool& normal,
                  const RunOptions& options);

/// Converts a normalized whisper mel spectrogram with \p g, processing at
/// most \p batch_size segments per forward pass. The result carries
/// \p target_norm.
signal::MelSpectrogram convert_utterance(const nn::Generator<float>& g,
                                         const signal::MelSpectrogram& whisper,
                                         const signal::NormStats& target_norm,
                                         std::size_t batch_size = 64);

}  // namespace w2sc::train
