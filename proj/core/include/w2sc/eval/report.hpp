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

#include <filesystem>
#include <string>
#include <vector>

#include "w2sc/eval/f0.hpp"
#include "w2sc/signal/waveform.hpp"

namespace w2sc::eval {

struct EvalConfig {
  F0Options f0;
  /// Analysis for DTW, MCD and silence; the hop matches the F0 hop so that
  /// F0 and spectral frames coincide.
  std::size_t n_fft = 1024;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = 1e-5;
  double silence_threshold_db = 40.0;
};

struct PairMetrics {
  std::string id;
  double rmse_f0_original = 0.0;
  double rmse_f0_processed = 0.0;
  double rmse_f0_normalized = 0.0;  // per-pair-normalized processed variant
  double mcd_db = 0.0;
  double voiced_frame_fraction = 0.0;  // of the converted signal
};

/// Aligns \p converted to \p reference with DTW on log-mel frames and
/// computes every metric. Both must share the sample rate.
PairMetrics evaluate_pair(const std::string& id, const signal::Waveform& converted,
                          const signal::Waveform& reference, const EvalConfig& config = {});

struct EvalJob {
  std::string id;
  std::filesystem::path converted;
  std::filesystem::path reference;
};

/// Evaluates every job concurrently; results keep the job order.
std::vector<PairMetrics> evaluate_jobs(const std::vector<EvalJob>& jobs,
                                       const EvalConfig& config = {});

/// Column means over the rows, with id "mean".
PairMetrics summarize(const std::vector<PairMetrics>& rows);

inline constexpr const char* kReportHeader =
    "id,rmse_f0_original,rmse_f0_processed,rmse_f0_normalized,mcd_db,voiced_frame_fraction";

/// CSV with one row per pair and a final "mean" row.
std::string format_report(const std::vector<PairMetrics>& rows);
void write_report(const std::filesystem::path& path, const std::vector<PairMetrics>& rows);

}  // namespace w2sc::eval
