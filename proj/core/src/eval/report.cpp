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
#include "w2sc/eval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "common/parallel.hpp"
#include "w2sc/error.hpp"
#include "w2sc/eval/dtw.hpp"
#include "w2sc/eval/metrics.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/signal/silence.hpp"

namespace w2sc::eval {

PairMetrics evaluate_pair(const std::string& id, const signal::Waveform& converted,
                          const signal::Waveform& reference, const EvalConfig& config) {
  if (converted.sample_rate != reference.sample_rate)
    throw InvalidArgument(id + ": sample rates differ");
  if (converted.size() == 0 || reference.size() == 0) throw InvalidArgument(id + ": empty signal");
  const int sr = reference.sample_rate;
  signal::MelConfig mc;
  mc.stft.n_fft = config.n_fft;
  mc.stft.hop = static_cast<std::size_t>(std::lround(config.f0.hop_seconds * sr));
  mc.log_floor = config.log_floor;
  const signal::MelFilterbank fb(signal::kMelBands, config.n_fft, sr, config.f_min,
                                 std::min(config.f_max, sr / 2.0));
  const auto mel_c = signal::mel_spectrogram(converted, fb, mc);
  const auto mel_t = signal::mel_spectrogram(reference, fb, mc);
  const auto f0_c = estimate_f0(converted, config.f0);
  const auto f0_t = estimate_f0(reference, config.f0);
  if (f0_c.size() != mel_c.frames || f0_t.size() != mel_t.frames)
    throw InvalidArgument(id + ": F0 and spectral frames disagree");

  const DtwResult dtw = dtw_align(features_from_mel(mel_c), features_from_mel(mel_t));
  const auto silent = signal::frame_silence_mask(mel_t, config.silence_threshold_db);
  const AlignedF0 aligned = align_f0(f0_c, f0_t, dtw.path, silent);

  PairMetrics m;
  m.id = id;
  try {
    m.rmse_f0_original = rmse_f0(aligned, RmseVariant::kOriginal).value;
    const RmseResult processed = rmse_f0(aligned, RmseVariant::kProcessed);
    m.rmse_f0_processed = processed.value;
    m.rmse_f0_normalized = processed.normalized;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(id + ": " + e.what());
  }
  m.mcd_db = mel_cepstral_distortion(mel_c, mel_t, dtw.path);
  m.voiced_frame_fraction = f0_c.voiced_fraction();
  return m;
}

std::vector<PairMetrics> evaluate_jobs(const std::vector<EvalJob>& jobs, const EvalConfig& config) {
  std::vector<PairMetrics> out(jobs.size());
  detail::parallel_for(jobs.size(), [&](std::size_t i) {
    const auto reference = signal::load_wav(jobs[i].reference);
    const auto converted = signal::load_wav(jobs[i].converted, reference.sample_rate);
    out[i] = evaluate_pair(jobs[i].id, converted, reference, config);
  });
  return out;
}

PairMetrics summarize(const std::vector<PairMetrics>& rows) {
  PairMetrics mean;
  mean.id = "mean";
  if (rows.empty()) return mean;
  for (const auto& r : rows) {
    mean.rmse_f0_original += r.rmse_f0_original;
    mean.rmse_f0_processed += r.rmse_f0_processed;
    mean.rmse_f0_normalized += r.rmse_f0_normalized;
    mean.mcd_db += r.mcd_db;
    mean.voiced_frame_fraction += r.voiced_frame_fraction;
  }
  const double n = static_cast<double>(rows.size());
  mean.rmse_f0_original /= n;
  mean.rmse_f0_processed /= n;
  mean.rmse_f0_normalized /= n;
  mean.mcd_db /= n;
  mean.voiced_frame_fraction /= n;
  return mean;
}

namespace {

std::string csv_row(const PairMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g,%.9g,%.9g", m.rmse_f0_original,
                m.rmse_f0_processed, m.rmse_f0_normalized, m.mcd_db, m.voiced_frame_fraction);
  std::string id = m.id;
  if (id.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : id) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    id = quoted + "\"";
  }
  return id + buf;
}

}  // namespace

std::string format_report(const std::vector<PairMetrics>& rows) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  out += csv_row(summarize(rows)) + "\n";
  return out;
}

void write_report(const std::filesystem::path& path, const std::vector<PairMetrics>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write report " + path.string());
  f << format_report(rows);
  if (!f) throw IoError("cannot write report " + path.string());
}

}  // namespace w2sc::eval
