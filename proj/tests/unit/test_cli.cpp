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
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "w2sc/app/commands.hpp"
#include "w2sc/app/run_config.hpp"
#include "w2sc/app/synth.hpp"
#include "w2sc/error.hpp"
#include "w2sc/eval/f0.hpp"
#include "w2sc/signal/waveform.hpp"

namespace w2sc::app {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

RunConfig quick_config(std::uint64_t steps = 0) {
  RunConfig c;
  c.train.batch_size = 2;
  c.train.steps = steps;
  c.train.seed = 3;
  return c;
}

TEST(Config, UnknownAndRepeatedKeysAreFatal) {
  EXPECT_THROW(parse_config("signal.nfft = 512\n"), ConfigError);
  EXPECT_THROW(parse_config("train.lr_g = 1e-4\ntrain.lr_g = 2e-4\n"), ConfigError);
  EXPECT_THROW(parse_config("train.lr_g = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("train.lr_g = 2\n"), ConfigError);
  try {
    parse_config("# comment\n\nlosses.delta = 0.5\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Config, EchoRoundTrips) {
  RunConfig c;
  c.train.lr_g = 1.5e-4;
  c.train.weights.delta = 0.75;
  c.train.weights.literal_cosine = true;
  c.signal.griffin_lim_iterations = 32;
  c.f0.voicing_threshold = 0.35;
  const std::string echo = c.echo();
  const RunConfig back = parse_config(echo);
  EXPECT_EQ(back.echo(), echo);
  EXPECT_EQ(back.signal, c.signal);
  EXPECT_EQ(back.train.lr_g, 1.5e-4);
  EXPECT_TRUE(back.train.weights.literal_cosine);
  for (const auto& key : config_keys()) EXPECT_NE(echo.find(key + " = "), std::string::npos) << key;
}

TEST(Extract, EmptyDirectoryFails) {
  testing::TempDir dir("extract");
  fs::create_directories(dir / "in");
  std::ostringstream log;
  try {
    cmd_extract(dir / "in", dir / "out", RunConfig{}, log);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("no input files"), std::string::npos);
  }
}

TEST(Extract, WritesFeaturesAndStatsIdempotently) {
  testing::TempDir dir("extract");
  fs::create_directories(dir / "in");
  for (int i = 0; i < 3; ++i) {
    signal::save_wav(dir / "in" / ("a" + std::to_string(i) + ".wav"),
                     {testing::sine(150.0 + 50 * i, 0.5, 16000, 0.3), 16000});
  }
  std::ofstream(dir / "in" / "broken.wav") << "not a wav";
  std::ostringstream log;
  const auto s1 = cmd_extract(dir / "in", dir / "out1", RunConfig{}, log);
  EXPECT_EQ(s1.written, 3u);
  ASSERT_EQ(s1.failed.size(), 1u);
  EXPECT_NE(s1.failed[0].find("broken.wav"), std::string::npos);
  std::size_t mel = 0, stats = 0;
  for (const auto& e : fs::directory_iterator(dir / "out1")) {
    mel += e.path().extension() == ".mel";
    stats += e.path().filename() == kStatsFileName;
  }
  EXPECT_EQ(mel, 3u);
  EXPECT_EQ(stats, 1u);
  cmd_extract(dir / "in", dir / "out2", RunConfig{}, log);
  for (const auto& e : fs::directory_iterator(dir / "out1"))
    EXPECT_EQ(slurp(e.path()), slurp(dir / "out2" / e.path().filename())) << e.path();
}

TEST(Synth, VoicingAndLevel) {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto pair = synth_utterance(9, i);
    EXPECT_GT(eval::estimate_f0(pair.normal).voiced_fraction(), 0.8) << i;
    EXPECT_LT(eval::estimate_f0(pair.whisper).voiced_fraction(), 0.1) << i;
    const double db = 20.0 * std::log10(signal::rms(pair.whisper) / signal::rms(pair.normal));
    EXPECT_NEAR(db, -20.0, 1.0) << i;
  }
  const auto a = synth_utterance(9, 2), b = synth_utterance(9, 2);
  EXPECT_EQ(a.whisper.samples, b.whisper.samples);
}

TEST(Synth, CorpusLayout) {
  testing::TempDir dir("synth");
  std::ostringstream log;
  cmd_synth_corpus(dir.path(), 5, 1, 2, RunConfig{}, log);
  EXPECT_TRUE(fs::exists(dir / "whisper" / "utt_0000.wav"));
  EXPECT_TRUE(fs::exists(dir / "normal" / "utt_0002.wav"));
  EXPECT_FALSE(fs::exists(dir / "normal" / "utt_0003.wav"));
  EXPECT_TRUE(fs::exists(dir / "heldout" / "whisper" / "utt_0004.wav"));
}

// Shared small pipeline: synth corpus, features and a few training steps.
class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("pipeline");
    std::ostringstream log;
    cmd_synth_corpus(dir_->path() / "wav", 4, 5, 1, quick_config(), log);
    cmd_extract(dir_->path() / "wav", dir_->path() / "feat", quick_config(), log);
    cmd_train(dir_->path() / "feat", dir_->path() / "ck", quick_config(6), false, log);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static testing::TempDir* dir_;
};
testing::TempDir* Pipeline::dir_ = nullptr;

TEST_F(Pipeline, LossLogScheduleAndDeterminism) {
  const auto log = lines_of(dir_->path() / "ck" / kLossLogName);
  ASSERT_EQ(log.size(), 7u);
  std::size_t d_rows = 0;
  for (std::size_t i = 1; i < log.size(); ++i) d_rows += log[i].find(",,") == std::string::npos;
  EXPECT_EQ(d_rows, 2u);
  std::ostringstream sink;
  cmd_train(dir_->path() / "feat", dir_->path() / "ck2", quick_config(6), false, sink);
  EXPECT_EQ(lines_of(dir_->path() / "ck2" / kLossLogName), log);
}

TEST_F(Pipeline, ZeroBudgetWritesOnlyInitialCheckpoint) {
  std::ostringstream log;
  cmd_train(dir_->path() / "feat", dir_->path() / "ck0", quick_config(0), false, log);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir_->path() / "ck0"))
    if (e.path().extension() == ".ckpt") names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"latest.ckpt", "step_000000.ckpt"}));
}

TEST_F(Pipeline, ConvertKeepsDurationAndPeak) {
  std::ostringstream log;
  const fs::path in = dir_->path() / "wav" / "heldout" / "whisper" / "utt_0003.wav";
  cmd_convert(dir_->path() / "ck" / "latest.ckpt", in, dir_->path() / "conv.wav", quick_config(), log);
  const auto src = signal::load_wav(in);
  const auto out = signal::load_wav(dir_->path() / "conv.wav");
  EXPECT_LE(std::abs(static_cast<long>(out.samples.size()) - static_cast<long>(src.samples.size())), 256);
  double peak = 0.0;
  for (double v : out.samples) {
    ASSERT_TRUE(std::isfinite(v));
    peak = std::max(peak, std::abs(v));
  }
  EXPECT_LE(peak, 1.0);
  EXPECT_GT(peak, 0.0);
}

TEST_F(Pipeline, ConvertRejectsMismatchedFeatures) {
  std::ostringstream log;
  RunConfig other = quick_config();
  other.signal.f_max = 7000.0;
  EXPECT_THROW(cmd_convert(dir_->path() / "ck" / "latest.ckpt",
                           dir_->path() / "wav" / "heldout" / "whisper" / "utt_0003.wav",
                           dir_->path() / "conv_bad.wav", other, log),
               ShapeError);
}

TEST_F(Pipeline, EvaluateSelfAndSummary) {
  std::ostringstream log;
  const fs::path ref = dir_->path() / "wav" / "normal";
  const auto rows = cmd_evaluate(ref, ref, dir_->path() / "self.csv", quick_config(), log);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.rmse_f0_original, 0.0);
    EXPECT_EQ(r.rmse_f0_processed, 0.0);
    EXPECT_EQ(r.mcd_db, 0.0);
  }
  const auto csv = lines_of(dir_->path() / "self.csv");
  ASSERT_EQ(csv.size(), 5u);
  EXPECT_EQ(csv.front(), eval::kReportHeader);
  EXPECT_EQ(csv.back().substr(0, 5), "mean,");
  double vf = 0.0;
  for (const auto& r : rows) vf += r.voiced_frame_fraction;
  EXPECT_NEAR(std::stod(csv.back().substr(csv.back().rfind(',') + 1)), vf / 3.0, 1e-6);
  EXPECT_TRUE(fs::exists(dir_->path() / "self.csv.config"));
}

TEST_F(Pipeline, EvaluateNamesMissingPair) {
  std::ostringstream log;
  const fs::path partial = dir_->path() / "partial";
  fs::create_directories(partial);
  fs::copy_file(dir_->path() / "wav" / "normal" / "utt_0000.wav", partial / "utt_0000.wav");
  try {
    cmd_evaluate(partial, dir_->path() / "wav" / "normal", dir_->path() / "p.csv", quick_config(), log);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("utt_0001.wav"), std::string::npos) << e.what();
  }
}

#ifdef W2SC_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(W2SC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodes) {
  testing::TempDir dir("bin");
  EXPECT_EQ(run_cli("--help"), kExitOk);
  EXPECT_EQ(run_cli("no-such-command"), kExitValidation);
  fs::create_directories(dir / "empty");
  EXPECT_EQ(run_cli("extract " + (dir / "empty").string() + " " + (dir / "out").string()), kExitValidation);
  std::ofstream(dir / "bad.cfg") << "train.lr_g = 7\n";
  EXPECT_EQ(run_cli("--config " + (dir / "bad.cfg").string() + " synth-corpus " + (dir / "c").string()),
            kExitValidation);
  std::ofstream(dir / "junk.ckpt") << "junk";
  signal::save_wav(dir / "x.wav", {testing::sine(200.0, 0.3, 16000), 16000});
  EXPECT_EQ(run_cli("convert " + (dir / "junk.ckpt").string() + " " + (dir / "x.wav").string() + " " +
                    (dir / "o").string()),
            kExitRuntime);
  EXPECT_EQ(run_cli("synth-corpus " + (dir / "ok").string() + " -n 2 --seed 4"), kExitOk);
}
#endif

}  // namespace
}  // namespace w2sc::app
