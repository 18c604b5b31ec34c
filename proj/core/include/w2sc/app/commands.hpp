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
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "w2sc/app/run_config.hpp"
#include "w2sc/eval/report.hpp"

namespace w2sc::app {

/// Process exit codes of the w2sc tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // bad arguments, configuration or inputs
  kExitRuntime = 2,     // failure while running, such as a non-finite loss
};

/// Name of the per-directory normalization statistics file.
inline constexpr const char* kStatsFileName = "norm_stats.txt";
/// Name of the loss log inside the checkpoint directory.
inline constexpr const char* kLossLogName = "loss_log.csv";

struct ExtractSummary {
  std::size_t written = 0;
  std::vector<std::string> failed;  // "<file>: <reason>"
};

/// Log-mel features for every WAV of \p in_dir, normalized with statistics
/// over the readable files. When \p in_dir has "whisper/" and "normal/"
/// subdirectories each is processed into the same subdirectory of \p out_dir
/// with its own statistics. Unreadable files are reported and skipped; no
/// readable file is an error.
ExtractSummary cmd_extract(const std::filesystem::path& in_dir,
                           const std::filesystem::path& out_dir, const RunConfig& config,
                           std::ostream& log);

/// Writes \p n pairs as "<out>/{whisper,normal}/utt_NNNN.wav"; the last
/// \p holdout pairs go to "<out>/heldout/{whisper,normal}/" instead.
void cmd_synth_corpus(const std::filesystem::path& out_dir, std::size_t n, std::uint64_t seed,
                      std::size_t holdout, const RunConfig& config, std::ostream& log);

/// Trains on "<features>/{whisper,normal}" to config.train.steps, writing
/// checkpoints and the loss log into \p checkpoint_dir. With \p resume the
/// run continues from "<checkpoint_dir>/latest.ckpt"; otherwise any old loss
/// log is replaced.
void cmd_train(const std::filesystem::path& feature_dir,
               const std::filesystem::path& checkpoint_dir, const RunConfig& config, bool resume,
               std::ostream& log);

/// Converts one WAV into the file \p out, or every WAV of a directory into the
/// directory \p out.
void cmd_convert(const std::filesystem::path& checkpoint, const std::filesystem::path& in,
                 const std::filesystem::path& out, const RunConfig& config, std::ostream& log);

/// Evaluates "<converted>/X.wav" against "<reference>/X.wav" for every X and
/// writes the CSV report plus the effective config to "<report>.config".
/// Unmatched names are an error listing them.
std::vector<eval::PairMetrics> cmd_evaluate(const std::filesystem::path& converted_dir,
                                            const std::filesystem::path& reference_dir,
                                            const std::filesystem::path& report,
                                            const RunConfig& config, std::ostream& log);

}  // namespace w2sc::app
