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
#include "w2sc/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "w2sc/error.hpp"
#include "w2sc/train/checkpoint.hpp"

namespace w2sc::train {
namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs one loss term and turns a non-finite value anywhere inside it into an
// error naming the term.
template <typename Fn>
auto term(const char* name, std::uint64_t step, Fn&& fn) {
  auto fail = [&](const std::string& detail) {
    throw NonFiniteError(std::string("non-finite ") + name + " at step " + std::to_string(step) +
                         (detail.empty() ? "" : ": " + detail));
  };
  try {
    auto out = fn();
    for (float v : out.values())
      if (!std::isfinite(v)) fail("");
    return out;
  } catch (const NonFiniteError& e) {
    fail(e.what());
  }
  throw NonFiniteError("unreachable");
}

ad::AdamOptions adam_options(const TrainConfig& c, double lr) {
  return {lr, c.adam_beta1, c.adam_beta2, c.adam_eps};
}

}  // namespace

TrainState make_train_state(const TrainConfig& config) {
  TrainState st;
  st.config = config;
  std::mt19937_64 rng(config.seed);
  st.g.init(rng, config.init_std);
  st.d.init(rng, config.init_std);
  st.s.init(rng, config.init_std);
  st.opt_g = ad::Adam<float>(st.g.parameters(), adam_options(config, config.lr_g));
  st.opt_s = ad::Adam<float>(st.s.parameters(), adam_options(config, config.lr_g));
  st.opt_d = ad::Adam<float>(st.d.parameters(), adam_options(config, config.lr_d));
  return st;
}

bool is_d_step(std::uint64_t step, std::uint32_t g_steps_per_d_step) {
  return g_steps_per_d_step > 0 && step % g_steps_per_d_step == 0;
}

std::uint64_t step_seed(std::uint64_t seed, std::uint64_t step) {
  return splitmix64(splitmix64(seed) ^ step);
}

StepReport train_step(TrainState& st, const Batch& batch) {
  const auto& w = st.config.weights;
  StepReport report;
  report.step = st.step + 1;
  const std::uint64_t k = report.step;

  // One power iteration per step, ahead of every discriminator forward in it.
  st.d.refresh_spectral_norm(st.config.power_iterations);

  const auto g_params = st.g.parameters();
  const auto s_params = st.s.parameters();
  const auto d_params = st.d.parameters();

  // Generator and Siamese update; D is evaluated but held fixed.
  ad::Tensor<float> fake_detached;
  {
    ad::set_requires_grad(d_params, false);
    ad::Tape<float> tape;
    losses::GeneratorLossTerms<float> terms;
    ad::Tensor<float> fake = term("G(a)", k, [&] { return st.g.forward(tape, batch.whisper); });
    fake_detached = fake.detach();
    terms.adv = term("L_G_adv", k, [&] {
      return losses::g_adv_loss(tape, st.d.forward(tape, fake));
    });
    ad::Tensor<float> t;
    losses::TransformLoss<float> gs;
    terms.transform = term("L_GS", k, [&] {
      ad::Tensor<float> ea = st.s.forward(tape, batch.whisper);
      ad::Tensor<float> ef = st.s.forward(tape, fake);
      t = losses::transformation_vectors(tape, ea, batch.pairs);
      ad::Tensor<float> tp = losses::transformation_vectors(tape, ef, batch.pairs);
      gs = losses::siamese_transform_loss(tape, t, tp, w.literal_cosine);
      return gs.loss;
    });
    report.degenerate_pairs = gs.degenerate_pairs;
    terms.margin = term("L_S", k, [&] {
      return losses::siamese_margin_loss(tape, t, static_cast<float>(w.delta));
    });
    terms.identity = term("L_id", k, [&] {
      return losses::identity_loss(tape, st.g.forward(tape, batch.normal), batch.normal);
    });
    ad::Tensor<float> objective =
        term("G objective", k, [&] { return losses::joint_objective(tape, terms, w); });
    ad::zero_grads(g_params);
    ad::zero_grads(s_params);
    term("G backward", k, [&] {
      tape.backward(objective);
      return objective;
    });
    ad::set_requires_grad(d_params, true);
    st.opt_g.step();
    st.opt_s.step();
    report.loss_g_adv = terms.adv.item();
    report.loss_gs = terms.transform.item();
    report.loss_s = terms.margin.item();
    report.loss_id = terms.identity.item();
  }

  if (is_d_step(k, st.config.g_steps_per_d_step)) {
    ad::Tape<float> tape;
    ad::Tensor<float> loss = term("L_D", k, [&] {
      return losses::d_hinge_loss(tape, st.d.forward(tape, batch.normal),
                                  st.d.forward(tape, fake_detached));
    });
    ad::zero_grads(d_params);
    term("D backward", k, [&] {
      tape.backward(loss);
      return loss;
    });
    st.opt_d.step();
    report.loss_d = loss.item();
  }
  st.step = k;
  return report;
}

std::string format_log_row(const StepReport& r) {
  char buf[256];
  char ld[32] = "";
  if (r.loss_d) std::snprintf(ld, sizeof ld, "%.9g", *r.loss_d);
  std::snprintf(buf, sizeof buf, "%llu,%s,%.9g,%.9g,%.9g,%.9g",
                static_cast<unsigned long long>(r.step), ld, r.loss_g_adv, r.loss_gs, r.loss_s,
                r.loss_id);
  return buf;
}

namespace {

void write_checkpoints(const TrainState& st, const fs::path& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  char name[64];
  std::snprintf(name, sizeof name, "step_%06llu.ckpt", static_cast<unsigned long long>(st.step));
  save_checkpoint(st, dir / name);
  save_checkpoint(st, dir / "latest.ckpt");
}

}  // namespace

void run_training(TrainState& st, const SegmentPool& whisper, const SegmentPool& normal,
                  const RunOptions& options) {
  const std::uint64_t budget = options.stop_at > 0 ? std::min(options.stop_at, st.config.steps)
                                                   : st.config.steps;
  std::ofstream log;
  if (!options.log_path.empty()) {
    const bool fresh = !fs::exists(options.log_path) || fs::file_size(options.log_path) == 0;
    if (!options.log_path.parent_path().empty()) fs::create_directories(options.log_path.parent_path());
    log.open(options.log_path, std::ios::app);
    if (!log) throw IoError("cannot open loss log " + options.log_path.string());
    if (fresh) log << kLossLogHeader << '\n';
  }
  if (st.step >= budget) {
    if (st.step == 0) write_checkpoints(st, options.checkpoint_dir);
    return;
  }
  while (st.step < budget) {
    std::mt19937_64 rng(step_seed(st.config.seed, st.step));
    const Batch batch = sample_batch(whisper, normal, st.config.batch_size, rng);
    const StepReport r = train_step(st, batch);
    if (log.is_open()) log << format_log_row(r) << '\n' << std::flush;
    if (options.on_step) options.on_step(r);
    if (st.step % st.config.checkpoint_interval == 0 || st.step == budget)
      write_checkpoints(st, options.checkpoint_dir);
  }
}

signal::MelSpectrogram convert_utterance(const nn::Generator<float>& g,
                                         const signal::MelSpectrogram& whisper,
                                         const signal::NormStats& target_norm,
                                         std::size_t batch_size) {
  if (batch_size == 0) throw InvalidArgument("convert_utterance: batch size must be positive");
  SegmentedUtterance segs = segment_utterance(whisper, SegmentMode::kConvert);
  const std::size_t n = segs.segments.size();
  ad::Tape<float> tape(ad::Tape<float>::Mode::kNoGrad);
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t count = std::min(batch_size, n - begin);
    std::vector<std::size_t> index(count);
    for (std::size_t i = 0; i < count; ++i) index[i] = begin + i;
    ad::Tensor<float> y = g.forward(tape, stack_segments(segs.segments, index));
    for (std::size_t i = 0; i < count; ++i) {
      auto& v = segs.segments[begin + i].values;
      std::copy_n(y.data() + i * kSegmentSize, kSegmentSize, v.begin());
    }
  }
  signal::MelSpectrogram out = reassemble(segs.segments, segs.original_frames);
  out.norm = target_norm;
  return out;
}

}  // namespace w2sc::train
