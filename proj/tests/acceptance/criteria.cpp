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

#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <sstream>

#include "cases.hpp"
#include "grad_cases.hpp"
#include "oracles.hpp"
#include "w2sc/app/commands.hpp"
#include "w2sc/nn/generator.hpp"
#include "w2sc/signal/griffin_lim.hpp"
#include "w2sc/tensor/spectral_norm.hpp"
#include "w2sc/train/checkpoint.hpp"
#include "w2sc/train/trainer.hpp"

namespace w2sc::acceptance {
namespace {

namespace fs = std::filesystem;

constexpr double kShapeSeconds = 1.0;
constexpr double kGradTolerance = 1e-4;
constexpr double kGradSeconds = 300.0;
constexpr std::uint64_t kGradSeeds[] = {1, 2, 3};
constexpr double kLossTolerance = 1e-6;
constexpr std::size_t kSnMatrices = 20;
constexpr int kSnIterations = 5;
constexpr double kSnLow = 0.98, kSnHigh = 1.02;
constexpr std::uint64_t kScheduleSteps = 300;
constexpr std::uint64_t kExpectedDUpdates = 100;
constexpr std::uint64_t kResumeStep = 150;
constexpr double kGlFrequency = 440.0, kGlFrequencyTolerance = 5.0;
constexpr double kGlConvergence = 0.15;
constexpr double kGlSeconds = 10.0;
constexpr std::size_t kE2ePairs = 40, kE2eHoldout = 8;
constexpr std::uint64_t kE2eSteps = 5000;
constexpr double kVoicedGain = 0.3;
constexpr double kAlignmentTolerance = 1e-9;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Scratch directory: a subdirectory of the work dir, or a temporary one.
class Scratch {
 public:
  Scratch(const Options& o, const std::string& tag) {
    if (o.work_dir.empty()) {
      temp_ = std::make_unique<testing::TempDir>(tag);
      path_ = temp_->path();
    } else {
      path_ = o.work_dir / tag;
      fs::remove_all(path_);
      fs::create_directories(path_);
    }
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::unique_ptr<testing::TempDir> temp_;
  fs::path path_;
};

// ---- 1: shape conformance ------------------------------------------------

using nn::ShapeTrace;
using nn::ShapeTraceRow;

// Generator layer table. Row 6 outputs (1×3)×256, the only shape the
// decoder can consume. The two-input decoder rows list the transposed-conv
// input and the concatenated skip activation.
ShapeTrace expected_generator() {
  return {
      {"Encoder-conv1", "3×3", {"(128×12)×1"}, "(128×12)×64"},
      {"Encoder-self-attention", "", {"(128×12)×64"}, "(128×12)×64"},
      {"Encoder-padding", "", {"(128×12)×64"}, "(128×14)×64"},
      {"Encoder-downsample", "128×3", {"(128×14)×64"}, "(1×12)×256"},
      {"Encoder-downsample", "1×9", {"(1×12)×256"}, "(1×6)×256"},
      {"Encoder-downsample", "1×7", {"(1×6)×256"}, "(1×3)×256"},
      {"Decoder-upsample", "1×7", {"(1×6)×256", "(1×3)×256"}, "(1×6)×512"},
      {"Decoder-upsample", "1×9", {"(1×6)×512", "(1×12)×256"}, "(1×12)×512"},
      {"Decoder-upsample", "128×1", {"(1×12)×512"}, "(128×12)×1"},
  };
}

ShapeTrace expected_attention() {
  return {
      {"Conv1", "3×3", {"(128×12)×1"}, "(128×12)×64"},
      {"Conv2", "1×1", {"(128×12)×64"}, "(128×12)×16"},
      {"Conv3", "1×1", {"(128×12)×64"}, "(128×12)×16"},
      {"Matmul1", "", {"(128×12)×16", "16×(128×12)"}, "1536×1536"},
      {"Softmax", "", {"1536×1536"}, "1536×1536"},
      {"Conv4", "1×1", {"(128×12)×64"}, "(128×12)×128"},
      {"Matmul2", "", {"1536×1536", "(128×12)×128"}, "1536×128"},
      {"Reshape", "", {"1536×128"}, "(128×12)×128"},
      {"Conv5", "1×1", {"(128×12)×128"}, "(128×12)×64"},
  };
}

std::string describe(const ShapeTraceRow& r) {
  std::string s = r.layer + " [" + r.kernel + "] ";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) s += (i ? ", " : "") + r.inputs[i];
  return s + " -> " + r.output;
}

bool same_row(const ShapeTraceRow& a, const ShapeTraceRow& b) {
  return a.layer == b.layer && a.kernel == b.kernel && a.inputs == b.inputs && a.output == b.output;
}

// Empty when equal, otherwise the first mismatch.
std::string compare_trace(const char* table, const ShapeTrace& got, const ShapeTrace& want) {
  for (std::size_t i = 0; i < std::max(got.size(), want.size()); ++i) {
    if (i >= got.size()) return fmt("%s row %zu missing: %s", table, i + 1, describe(want[i]).c_str());
    if (i >= want.size()) return fmt("%s extra row %zu: %s", table, i + 1, describe(got[i]).c_str());
    if (!same_row(got[i], want[i]))
      return fmt("%s row %zu: got %s, want %s", table, i + 1, describe(got[i]).c_str(),
                 describe(want[i]).c_str());
  }
  return {};
}

Outcome shape_conformance(const Options&) {
  const Stopwatch clock;
  nn::Generator<float> g;
  std::mt19937_64 rng(1);
  g.init(rng);
  ad::Tensor<float> x({1, 1, nn::kSegmentBands, nn::kSegmentFrames});
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (float& v : x.values()) v = u(rng);
  ad::Tape<float> tape;
  nn::GeneratorTrace trace;
  g.forward(tape, x, &trace);
  const double t = clock.seconds();
  for (const auto& m : {compare_trace("generator table", trace.layers, expected_generator()),
                        compare_trace("attention table", trace.attention, expected_attention())})
    if (!m.empty()) return {false, m};
  return {t < kShapeSeconds,
          fmt("%zu + %zu rows match; %.3f s (limit %.0f s)", trace.layers.size(),
              trace.attention.size(), t, kShapeSeconds)};
}

// ---- 2: gradients --------------------------------------------------------

Outcome gradient_suite(const Options&) {
  const Stopwatch clock;
  std::vector<testing::GradCase> cases = testing::op_grad_cases();
  const std::size_t ops = cases.size();
  for (auto& c : testing::network_grad_cases()) cases.push_back(std::move(c));
  double worst = 0.0;
  std::string worst_where;
  std::size_t checked = 0, skipped = 0;
  for (const std::uint64_t seed : kGradSeeds) {
    for (const auto& c : cases) {
      std::mt19937_64 rng(seed);
      const auto p = c.make(rng);
      const auto r = testing::check_gradients(p.forward, p.inputs, rng, p.max_per_tensor);
      checked += r.checked;
      skipped += r.skipped;
      if (r.checked == 0) return {false, fmt("%s seed %llu: nothing checked", c.name.c_str(),
                                             static_cast<unsigned long long>(seed))};
      if (r.skipped * 4 > r.checked)
        return {false, fmt("%s seed %llu: %zu of %zu elements at kinks", c.name.c_str(),
                           static_cast<unsigned long long>(seed), r.skipped, r.checked)};
      if (r.max_rel_error >= worst) {
        worst = r.max_rel_error;
        worst_where = c.name + " seed " + std::to_string(seed) + ": " + r.worst;
      }
    }
  }
  const double t = clock.seconds();
  return {worst < kGradTolerance && t < kGradSeconds,
          fmt("%zu ops + %zu networks x %zu seeds, %zu elements (%zu kink skips); max rel err "
              "%.2e (limit %.0e) at %s; %.0f s (limit %.0f s)",
              ops, cases.size() - ops, std::size(kGradSeeds), checked, skipped, worst,
              kGradTolerance, worst_where.c_str(), t, kGradSeconds)};
}

// ---- 3: loss identities --------------------------------------------------

Outcome loss_identities(const Options&) {
  const auto cases = testing::loss_cases();
  double worst = 0.0;
  for (const auto& c : cases) {
    const double e = std::abs(c.value - c.expected);
    if (!(e <= kLossTolerance))
      return {false, fmt("%s: got %.9g, want %.9g", c.name.c_str(), c.value, c.expected)};
    worst = std::max(worst, e);
  }
  return {true, fmt("%zu cases; max abs err %.2e (limit %.0e)", cases.size(), worst, kLossTolerance)};
}

// ---- 4: spectral normalization -------------------------------------------

Outcome spectral_normalization(const Options&) {
  std::mt19937_64 rng(2026);
  double lo = 1e300, hi = 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < kSnMatrices; ++i) {
    const auto w = testing::random_tensor({64, 64}, rng, 1.0, false);
    ad::SpectralNorm<double> sn(64, 64, rng);
    sn.power_iteration(w, kSnIterations);
    ad::Tape<double> tape;
    const auto n = sn.normalize(tape, w);
    const double s = testing::top_singular_value({n.values().begin(), n.values().end()}, 64, 64);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    inside += s >= kSnLow && s <= kSnHigh;
  }
  return {inside == kSnMatrices,
          fmt("%zu of %zu matrices in [%.2f, %.2f]; top singular value range [%.4f, %.4f] after "
              "%d power iterations",
              inside, kSnMatrices, kSnLow, kSnHigh, lo, hi, kSnIterations)};
}

// ---- 5 and 6: schedule, determinism, resume ------------------------------

struct TrainingData {
  train::SegmentPool whisper;
  train::SegmentPool normal;
};

TrainingData training_data(const fs::path& dir) {
  std::ostringstream sink;
  const app::RunConfig cfg;
  app::cmd_synth_corpus(dir / "wav", 8, 11, 0, cfg, sink);
  app::cmd_extract(dir / "wav", dir / "feat", cfg, sink);
  const auto corpus = train::load_corpus(dir / "feat");
  return {train::build_pool(corpus.whisper), train::build_pool(corpus.normal)};
}

train::TrainConfig schedule_config() {
  train::TrainConfig c;
  c.steps = kScheduleSteps;
  c.checkpoint_interval = kResumeStep;
  c.seed = 20260;
  return c;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_report(const train::StepReport& a, const train::StepReport& b) {
  return a.step == b.step && a.loss_d == b.loss_d && a.loss_g_adv == b.loss_g_adv &&
         a.loss_gs == b.loss_gs && a.loss_s == b.loss_s && a.loss_id == b.loss_id &&
         a.degenerate_pairs == b.degenerate_pairs;
}

// One uninterrupted run, shared by criteria 5 and 6.
struct ReferenceRun {
  std::unique_ptr<Scratch> dir;
  TrainingData data;
  std::vector<train::StepReport> reports;
  std::uint64_t d_updates = 0;
  double seconds = 0;
};

const ReferenceRun& reference_run(const Options& o) {
  static ReferenceRun run = [&] {
    ReferenceRun r;
    r.dir = std::make_unique<Scratch>(o, "schedule");
    r.data = training_data(r.dir->path());
    const Stopwatch clock;
    auto st = train::make_train_state(schedule_config());
    train::run_training(st, r.data.whisper, r.data.normal,
                        {*r.dir / "ck", *r.dir / "full.csv", 0,
                         [&](const train::StepReport& s) { r.reports.push_back(s); }});
    r.d_updates = st.d_updates();
    r.seconds = clock.seconds();
    return r;
  }();
  return run;
}

Outcome schedule(const Options& o) {
  const auto& r = reference_run(o);
  std::size_t logged = 0, rows = 0;
  const auto lines = read_lines(*r.dir / "full.csv");
  for (std::size_t i = 1; i < lines.size(); ++i, ++rows) {
    const auto a = lines[i].find(','), b = lines[i].find(',', a + 1);
    logged += b > a + 1;
  }
  return {rows == kScheduleSteps && logged == kExpectedDUpdates && r.d_updates == kExpectedDUpdates,
          fmt("%zu steps logged, %zu with L_D, %llu optimizer updates (want %llu); %.0f s",
              rows, logged, static_cast<unsigned long long>(r.d_updates),
              static_cast<unsigned long long>(kExpectedDUpdates), r.seconds)};
}

Outcome determinism_and_resume(const Options& o) {
  const auto& ref = reference_run(o);
  const Stopwatch clock;
  const Scratch dir(o, "resume");

  std::vector<train::StepReport> again;
  auto second = train::make_train_state(schedule_config());
  train::run_training(second, ref.data.whisper, ref.data.normal,
                      {dir / "again", dir / "again.csv", 0,
                       [&](const train::StepReport& s) { again.push_back(s); }});
  if (read_lines(dir / "again.csv") != read_lines(*ref.dir / "full.csv"))
    return {false, "equal seeds gave different loss logs"};
  for (std::size_t i = 0; i < again.size(); ++i)
    if (!same_report(again[i], ref.reports[i]))
      return {false, fmt("equal seeds differ at step %zu", i + 1)};

  auto resumed = train::make_train_state(schedule_config());
  train::load_checkpoint(*ref.dir / "ck" / fmt("step_%06llu.ckpt",
                                               static_cast<unsigned long long>(kResumeStep)),
                         resumed);
  if (resumed.step != kResumeStep) return {false, "checkpoint did not restore the step counter"};
  std::vector<train::StepReport> tail;
  train::run_training(resumed, ref.data.whisper, ref.data.normal,
                      {dir / "resumed", {}, 0,
                       [&](const train::StepReport& s) { tail.push_back(s); }});
  if (tail.size() != kScheduleSteps - kResumeStep)
    return {false, fmt("resumed run made %zu steps", tail.size())};
  for (std::size_t i = 0; i < tail.size(); ++i)
    if (!same_report(tail[i], ref.reports[kResumeStep + i]))
      return {false, fmt("resumed run differs at step %llu",
                         static_cast<unsigned long long>(kResumeStep + i + 1))};
  const bool same_weights = slurp(dir / "resumed" / "latest.ckpt") == slurp(*ref.dir / "ck" / "latest.ckpt") &&
                            slurp(dir / "again" / "latest.ckpt") == slurp(*ref.dir / "ck" / "latest.ckpt");
  return {same_weights,
          fmt("%zu steps equal across seeds; steps %llu-%llu equal after resume; final "
              "checkpoints %s; %.0f s",
              again.size(), static_cast<unsigned long long>(kResumeStep + 1),
              static_cast<unsigned long long>(kScheduleSteps),
              same_weights ? "byte-identical" : "differ", clock.seconds())};
}

// ---- 7: Griffin-Lim ------------------------------------------------------

Outcome griffin_lim(const Options&) {
  const Stopwatch clock;
  constexpr int kRate = 16000;
  const auto x = testing::sine(kGlFrequency, 1.0, kRate);
  const signal::StftConfig config;
  const auto target = signal::magnitude(signal::stft(x, config));
  signal::GriffinLimOptions opt;
  opt.iterations = 60;
  opt.track_error = true;
  opt.length = x.size();
  const auto r = signal::griffin_lim(target, config, kRate, opt);
  const double t = clock.seconds();
  const auto spectrum = testing::naive_rdft(r.waveform.samples);
  std::size_t peak = 1;
  for (std::size_t k = 1; k < spectrum.size(); ++k)
    if (std::abs(spectrum[k]) > std::abs(spectrum[peak])) peak = k;
  const double f = static_cast<double>(peak) * kRate / r.waveform.samples.size();
  const double err = r.convergence.back();
  return {std::abs(f - kGlFrequency) <= kGlFrequencyTolerance && err < kGlConvergence &&
              t < kGlSeconds,
          fmt("dominant %.1f Hz (want %.0f +- %.0f); convergence error %.4f after %zu iterations "
              "(limit %.2f); %.2f s (limit %.0f s)",
              f, kGlFrequency, kGlFrequencyTolerance, err, r.convergence.size(), kGlConvergence,
              t, kGlSeconds)};
}

// ---- 8: end-to-end -------------------------------------------------------

Outcome end_to_end(const Options& o) {
  const Stopwatch clock;
  const Scratch dir(o, "e2e");
  std::ostringstream log;
  app::RunConfig cfg;
  cfg.train.steps = kE2eSteps;
  cfg.train.seed = 1;
  app::cmd_synth_corpus(dir / "wav", kE2ePairs, 2026, kE2eHoldout, cfg, log);
  app::cmd_extract(dir / "wav", dir / "feat", cfg, log);
  app::cmd_train(dir / "feat", dir / "ck", cfg, false, log);
  const double train_seconds = clock.seconds();
  const fs::path held = dir / "wav" / "heldout";
  app::cmd_convert(dir / "ck" / "latest.ckpt", held / "whisper", dir / "converted", cfg, log);
  const auto conv = eval::summarize(
      app::cmd_evaluate(dir / "converted", held / "normal", dir / "converted.csv", cfg, log));
  const auto whisper = eval::summarize(
      app::cmd_evaluate(held / "whisper", held / "normal", dir / "whisper.csv", cfg, log));
  const bool voiced = conv.voiced_frame_fraction >= whisper.voiced_frame_fraction + kVoicedGain;
  const bool f0 = conv.rmse_f0_processed < whisper.rmse_f0_processed;
  return {voiced && f0,
          fmt("voiced fraction %.3f vs whisper %.3f (want gain >= %.1f); rmse_f0_processed %.1f "
              "vs whisper %.1f Hz; training %.0f s, total %.0f s",
              conv.voiced_frame_fraction, whisper.voiced_frame_fraction, kVoicedGain,
              conv.rmse_f0_processed, whisper.rmse_f0_processed, train_seconds, clock.seconds())};
}

// ---- 9: evaluation oracle ------------------------------------------------

Outcome evaluation_oracle(const Options&) {
  const auto cases = testing::alignment_cases(6);
  double worst = 0.0;
  for (const auto& c : cases) {
    const double e = std::abs(c.value - c.expected);
    if (!(e <= kAlignmentTolerance))
      return {false, fmt("%s: got %.12g, want %.12g", c.name.c_str(), c.value, c.expected)};
    worst = std::max(worst, e);
  }
  return {true, fmt("%zu cases; max abs err %.2e (limit %.0e)", cases.size(), worst,
                    kAlignmentTolerance)};
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "shape conformance", shape_conformance},
      {2, "gradient suite", gradient_suite},
      {3, "loss identities", loss_identities},
      {4, "spectral normalization", spectral_normalization},
      {5, "update schedule", schedule},
      {6, "determinism and resume", determinism_and_resume},
      {7, "Griffin-Lim", griffin_lim},
      {8, "end-to-end", end_to_end},
      {9, "evaluation oracle", evaluation_oracle},
  };
  return all;
}

}  // namespace w2sc::acceptance
