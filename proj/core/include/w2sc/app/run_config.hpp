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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "w2sc/eval/report.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/train/config.hpp"

namespace w2sc::app {

struct SignalSettings {
  int sample_rate = 16000;
  std::size_t n_fft = 1024;
  std::size_t hop = 256;
  std::size_t n_mels = signal::kMelBands;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = 1e-5;
  double mel_ridge = 1e-3;
  std::size_t griffin_lim_iterations = 60;
  double silence_db = 40.0;

  bool operator==(const SignalSettings&) const = default;
};

/// Every tunable of a run, addressed by dotted keys such as "signal.n_fft",
/// "losses.delta" or "train.lr_g".
struct RunConfig {
  SignalSettings signal;
  train::TrainConfig train;
  eval::F0Options f0;
  std::size_t convert_batch_size = 64;

  /// Throws ConfigError naming the first invalid key.
  void validate() const;

  /// Canonical "key = value" text listing every key; parsing it back yields
  /// an equal configuration.
  std::string echo() const;

  signal::MelConfig mel_config() const;
  signal::MelFilterbank filterbank() const;
  eval::EvalConfig eval_config() const;
};

/// Every recognized key, in echo order.
std::vector<std::string> config_keys();

/// Applies "key = value" lines on top of \p base. Blank lines and lines
/// starting with '#' are ignored. Unknown keys, repeated keys and malformed
/// values throw ConfigError with the line number. The result is validated.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace w2sc::app
