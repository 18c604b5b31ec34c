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

#include "w2sc/losses/losses.hpp"

namespace w2sc::train {

struct TrainConfig {
  std::size_t batch_size = 16;
  std::uint64_t steps = 5000;             // total generator steps
  std::uint32_t g_steps_per_d_step = 3;
  double lr_g = 2e-4;
  double lr_d = 1e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double init_std = 0.02;
  int power_iterations = 1;               // per training step
  std::uint64_t seed = 0;
  std::uint64_t checkpoint_interval = 1000;
  losses::LossWeights weights;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

}  // namespace w2sc::train
