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
#include "w2sc/train/config.hpp"

#include <string>

#include "w2sc/error.hpp"

namespace w2sc::train {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid train config: " + what);
}

}  // namespace

void TrainConfig::validate() const {
  require(batch_size >= 2, "train.batch_size must be at least 2");
  require(g_steps_per_d_step >= 1, "train.g_steps_per_d_step must be at least 1");
  require(lr_g > 0 && lr_g < 1, "train.lr_g must lie in (0, 1)");
  require(lr_d > 0 && lr_d < 1, "train.lr_d must lie in (0, 1)");
  require(adam_beta1 >= 0 && adam_beta1 < 1, "train.adam_beta1 must lie in [0, 1)");
  require(adam_beta2 >= 0 && adam_beta2 < 1, "train.adam_beta2 must lie in [0, 1)");
  require(adam_eps > 0, "train.adam_eps must be positive");
  require(init_std > 0, "train.init_std must be positive");
  require(power_iterations >= 1, "train.power_iterations must be at least 1");
  require(checkpoint_interval >= 1, "train.checkpoint_interval must be at least 1");
  require(weights.lambda_s >= 0, "losses.lambda_s must be nonnegative");
  require(weights.lambda_id >= 0, "losses.lambda_id must be nonnegative");
  require(weights.delta >= 0, "losses.delta must be nonnegative");
}

}  // namespace w2sc::train
