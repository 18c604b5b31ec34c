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
#include "w2sc/app/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>

#include "common/parallel.hpp"
#include "w2sc/app/synth.hpp"
#include "w2sc/error.hpp"
#include "w2sc/signal/griffin_lim.hpp"
#include "w2sc/signal/mel.hpp"
#include "w2sc/train/checkpoint.hpp"
#include "w2sc/train/trainer.hpp"

namespace w2sc::app {
namespace fs = std::filesystem;

namespace {

// Converted waveforms are scaled to this peak.
constexpr double kOutputPeak = 0.9;

std::vector<fs::path> wav_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidArgument("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw IoError("cannot write " + path.string());
}

std::string stats_text(const signal::NormStats& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "min = %.9g\nmax = %.9g\n", s.min, s.max);
  return buf;
}

ExtractSummary extract_domain(const fs::path& in_dir, const fs::path& out_dir,
                              const RunConfig& config, std::ostream& log) {
  const auto files = wav_files(in_dir);
  if (files.empty()) throw InvalidArgument("no input files in " + in_dir.string());
  const auto fb = config.filterbank();
  const auto mc = config.mel_config();
  std::vector<std::optional<signal::MelSpectrogram>> mels(files.size());
  std::vector<std::string> errors(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) {
    try {
      mels[i] = signal::mel_spectrogram(signal::load_wav(files[i], config.signal.sample_rate), fb, mc);
    } catch (const std::exception& e) {
      errors[i] = files[i].string() + ": " + e.what();
    }
  });
  ExtractSummary summary;
  std::vector<signal::MelSpectrogram> ok;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (mels[i]) {
      ok.push_back(*mels[i]);
    } else {
      log << "skipping " << errors[i] << "\n";
      summary.failed.push_back(errors[i]);
    }
  }
  if (ok.empty()) throw InvalidArgument("no readable input files in " + in_dir.string());
  const signal::NormStats stats = signal::compute_norm_stats(ok);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!mels[i]) continue;
    signal::save_mel(out_dir / (files[i].stem().string() + ".mel"), signal::normalize(*mels[i], stats));
    ++summary.written;
  }
  write_text(out_dir / kStatsFileName, stats_text(stats));
  log << "extracted " << summary.written << " files from " << in_dir.string() << "\n";
  return summary;
}

void check_compatible(const std::string& echo, const RunConfig& config) {
  if (echo.empty()) return;
  const RunConfig saved = parse_config(echo);
  if (!(saved.signal == config.signal)) {
    throw ShapeError("checkpoint was trained with different signal settings:\n" + echo);
  }
}

signal::Waveform convert_one(const train::TrainState& st, const fs::path& in,
                             const RunConfig& config, const signal::MelInverter& inverter) {
  const signal::Waveform w = signal::load_wav(in, config.signal.sample_rate);
  if (w.size() == 0) throw InvalidArgument("empty input " + in.string());
  const auto fb = config.filterbank();
  const auto mel = signal::normalize(signal::mel_spectrogram(w, fb, config.mel_config()), st.whisper_norm);
  const auto converted = train::convert_utterance(st.g, mel, st.normal_norm, config.convert_batch_size);
  const signal::Magnitude mag = inverter.invert(signal::denormalize(converted));
  signal::GriffinLimOptions gl;
  gl.iterations = config.signal.griffin_lim_iterations;
  gl.length = w.size();
  signal::Waveform out = signal::griffin_lim(mag, config.mel_config().stft, w.sample_rate, gl).waveform;
  double peak = 0.0;
  for (double v : out.samples) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite sample converting " + in.string());
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0)
    for (double& v : out.samples) v *= kOutputPeak / peak;
  return out;
}

}  // namespace

ExtractSummary cmd_extract(const fs::path& in_dir, const fs::path& out_dir, const RunConfig& config,
                           std::ostream& log) {
  if (!fs::is_directory(in_dir)) throw InvalidArgument("not a directory: " + in_dir.string());
  const bool paired = fs::is_directory(in_dir / "whisper") || fs::is_directory(in_dir / "normal");
  if (!paired) {
    if (wav_files(in_dir).empty()) throw InvalidArgument("no input files");
    return extract_domain(in_dir, out_dir, config, log);
  }
  ExtractSummary total;
  for (const char* domain : {"whisper", "normal"}) {
    if (!fs::is_directory(in_dir / domain)) {
      throw InvalidArgument("no input files: missing " + (in_dir / domain).string());
    }
    if (wav_files(in_dir / domain).empty()) {
      throw InvalidArgument("no input files in " + (in_dir / domain).string());
    }
  }
  for (const char* domain : {"whisper", "normal"}) {
    ExtractSummary s = extract_domain(in_dir / domain, out_dir / domain, config, log);
    total.written += s.written;
    total.failed.insert(total.failed.end(), s.failed.begin(), s.failed.end());
  }
  return total;
}

void cmd_synth_corpus(const fs::path& out_dir, std::size_t n, std::uint64_t seed,
                      std::size_t holdout, const RunConfig& config, std::ostream& log) {
  if (n == 0) throw InvalidArgument("synth-corpus: need at least one utterance");
  if (holdout >= n) throw InvalidArgument("synth-corpus: holdout must be smaller than the corpus");
  SynthOptions options;
  options.sample_rate = config.signal.sample_rate;
  for (const char* sub : {"whisper", "normal"}) {
    fs::create_directories(out_dir / sub);
    if (holdout > 0) fs::create_directories(out_dir / "heldout" / sub);
  }
  detail::parallel_for(n, [&](std::size_t i) {
    const SynthPair p = synth_utterance(seed, i, options);
    char name[32];
    std::snprintf(name, sizeof name, "utt_%04zu.wav", i);
    const fs::path dir = i + holdout >= n ? out_dir / "heldout" : out_dir;
    signal::save_wav(dir / "whisper" / name, p.whisper);
    signal::save_wav(dir / "normal" / name, p.normal);
  });
  log << "wrote " << n - holdout << " training and " << holdout << " held-out pairs to "
      << out_dir.string() << "\n";
}

void cmd_train(const fs::path& feature_dir, const fs::path& checkpoint_dir, const RunConfig& config,
               bool resume, std::ostream& log) {
  const train::Corpus corpus = train::load_corpus(feature_dir);
  const train::SegmentPool whisper = train::build_pool(corpus.whisper);
  const train::SegmentPool normal = train::build_pool(corpus.normal);
  log << "corpus: " << corpus.whisper.size() << " whisper / " << corpus.normal.size()
      << " normal utterances, " << whisper.segments.size() << " / " << normal.segments.size()
      << " segments\n";

  train::TrainState st = train::make_train_state(config.train);
  st.whisper_norm = corpus.whisper_norm;
  st.normal_norm = corpus.normal_norm;
  st.config_echo = config.echo();
  fs::create_directories(checkpoint_dir);
  const fs::path log_path = checkpoint_dir / kLossLogName;
  if (resume) {
    const fs::path latest = checkpoint_dir / "latest.ckpt";
    if (!fs::exists(latest)) throw InvalidArgument("nothing to resume: " + latest.string() + " is missing");
    train::load_checkpoint(latest, st);
    check_compatible(st.config_echo, config);
    st.config_echo = config.echo();
    log << "resuming at step " << st.step << "\n";
  } else if (fs::exists(log_path)) {
    fs::remove(log_path);
  }

  train::RunOptions options;
  options.checkpoint_dir = checkpoint_dir;
  options.log_path = log_path;
  options.on_step = [&](const train::StepReport& r) {
    if (r.step % 100 == 0 || r.step == config.train.steps) {
      log << "step " << r.step << " L_G_adv " << r.loss_g_adv << " L_GS " << r.loss_gs << " L_S "
          << r.loss_s << " L_id " << r.loss_id << "\n"
          << std::flush;
    }
  };
  train::run_training(st, whisper, normal, options);
  log << "finished at step " << st.step << " with " << st.d_updates() << " discriminator updates\n";
}

void cmd_convert(const fs::path& checkpoint, const fs::path& in, const fs::path& out,
                 const RunConfig& config, std::ostream& log) {
  train::TrainState st = train::make_train_state(config.train);
  train::load_checkpoint(checkpoint, st);
  check_compatible(st.config_echo, config);
  const signal::MelInverter inverter(config.filterbank(), config.signal.mel_ridge);
  if (!fs::is_directory(in)) {
    signal::save_wav(out, convert_one(st, in, config, inverter));
    log << "converted " << in.string() << " -> " << out.string() << "\n";
    return;
  }
  const auto files = wav_files(in);
  if (files.empty()) throw InvalidArgument("no input files in " + in.string());
  fs::create_directories(out);
  std::mutex log_mutex;
  detail::parallel_for(files.size(), [&](std::size_t i) {
    signal::save_wav(out / files[i].filename(), convert_one(st, files[i], config, inverter));
    std::lock_guard lock(log_mutex);
    log << "converted " << files[i].string() << "\n";
  });
}

std::vector<eval::PairMetrics> cmd_evaluate(const fs::path& converted_dir,
                                            const fs::path& reference_dir, const fs::path& report,
                                            const RunConfig& config, std::ostream& log) {
  std::map<std::string, fs::path> converted, reference;
  for (const auto& p : wav_files(converted_dir)) converted[p.stem().string()] = p;
  for (const auto& p : wav_files(reference_dir)) reference[p.stem().string()] = p;
  if (reference.empty()) throw InvalidArgument("no input files in " + reference_dir.string());
  std::string unmatched;
  for (const auto& [id, p] : reference)
    if (!converted.count(id)) unmatched += "\n  missing converted file for " + p.string();
  for (const auto& [id, p] : converted)
    if (!reference.count(id)) unmatched += "\n  missing reference file for " + p.string();
  if (!unmatched.empty()) throw InvalidArgument("unmatched files:" + unmatched);

  std::vector<eval::EvalJob> jobs;
  for (const auto& [id, p] : reference) jobs.push_back({id, converted.at(id), p});
  const auto rows = eval::evaluate_jobs(jobs, config.eval_config());
  if (!report.parent_path().empty()) fs::create_directories(report.parent_path());
  eval::write_report(report, rows);
  write_text(report.string() + ".config", config.echo());
  const auto mean = eval::summarize(rows);
  log << "evaluated " << rows.size() << " pairs: mean rmse_f0_processed " << mean.rmse_f0_processed
      << " Hz, mean voiced fraction " << mean.voiced_frame_fraction << "\n";
  return rows;
}

}  // namespace w2sc::app
