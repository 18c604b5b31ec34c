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
// Command-line entry points of the whisper-to-normal conversion pipeline.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "w2sc/app/commands.hpp"
#include "w2sc/app/run_config.hpp"
#include "w2sc/error.hpp"

namespace {

using namespace w2sc;

app::RunConfig effective_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  app::RunConfig config = path.empty() ? app::RunConfig{} : app::load_config(path);
  if (seed) config.train.seed = *seed;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Whisper to normal speech conversion"};
  cli.require_subcommand(1);
  cli.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  cli.add_option("--config", config_path, "flat 'key = value' configuration file")
      ->check(CLI::ExistingFile);
  cli.add_option("--seed", seed, "overrides train.seed");

  std::string a, b, c;
  auto* extract = cli.add_subcommand("extract", "log-mel features for a directory of WAV files");
  extract->add_option("in_dir", a, "WAV directory (flat, or with whisper/ and normal/)")->required();
  extract->add_option("out_dir", b, "feature directory")->required();

  std::size_t count = 40, holdout = 0;
  auto* synth = cli.add_subcommand("synth-corpus", "synthetic paired whisper/normal corpus");
  synth->add_option("out_dir", a, "output directory")->required();
  synth->add_option("-n,--count", count, "number of pairs")->capture_default_str();
  synth->add_option("--holdout", holdout, "pairs written to heldout/")->capture_default_str();

  bool resume = false;
  auto* train = cli.add_subcommand("train", "train the generator, discriminator and Siamese network");
  train->add_option("feature_dir", a, "directory with whisper/ and normal/ features")->required();
  train->add_option("checkpoint_dir", b, "checkpoint and loss log directory")->required();
  train->add_flag("--resume", resume, "continue from checkpoint_dir/latest.ckpt");

  auto* convert = cli.add_subcommand("convert", "convert whispered WAV files");
  convert->add_option("checkpoint", a, "checkpoint file")->required();
  convert->add_option("input", b, "WAV file or directory")->required();
  convert->add_option("output", c, "WAV file or directory")->required();

  auto* evaluate = cli.add_subcommand("evaluate", "F0 RMSE and mel-cepstral distortion report");
  evaluate->add_option("converted_dir", a, "converted WAV directory")->required();
  evaluate->add_option("reference_dir", b, "reference WAV directory")->required();
  evaluate->add_option("report", c, "CSV report path")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? app::kExitOk : app::kExitValidation;
  }

  try {
    const app::RunConfig config = effective_config(config_path, seed);
    if (*extract) {
      app::cmd_extract(a, b, config, std::cerr);
    } else if (*synth) {
      app::cmd_synth_corpus(a, count, config.train.seed, holdout, config, std::cerr);
    } else if (*train) {
      app::cmd_train(a, b, config, resume, std::cerr);
    } else if (*convert) {
      app::cmd_convert(a, b, c, config, std::cerr);
    } else if (*evaluate) {
      app::cmd_evaluate(a, b, c, config, std::cerr);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "w2sc: " << e.what() << "\n";
    return app::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "w2sc: " << e.what() << "\n";
    return app::kExitRuntime;
  }
  return app::kExitOk;
}
