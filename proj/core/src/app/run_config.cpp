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
#include "w2sc/app/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "w2sc/error.hpp"

namespace w2sc::app {
namespace {

struct Entry {
  std::string key;
  std::function<void(std::string_view)> set;
  std::function<std::string()> get;
};

template <typename Int>
Entry integer(std::string key, Int& field) {
  return {key,
          [&field, key](std::string_view v) {
            Int out{};
            auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || end != v.data() + v.size())
              throw ConfigError(key + ": expected an integer, got '" + std::string(v) + "'");
            field = out;
          },
          [&field] { return std::to_string(field); }};
}

Entry real(std::string key, double& field) {
  return {key,
          [&field, key](std::string_view v) {
            double out = 0.0;
            auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out))
              throw ConfigError(key + ": expected a finite number, got '" + std::string(v) + "'");
            field = out;
          },
          [&field] {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", field);
            return std::string(buf);
          }};
}

Entry boolean(std::string key, bool& field) {
  return {key,
          [&field, key](std::string_view v) {
            if (v == "true" || v == "1") {
              field = true;
            } else if (v == "false" || v == "0") {
              field = false;
            } else {
              throw ConfigError(key + ": expected true or false, got '" + std::string(v) + "'");
            }
          },
          [&field] { return std::string(field ? "true" : "false"); }};
}

std::vector<Entry> entries(RunConfig& c) {
  auto& s = c.signal;
  auto& t = c.train;
  auto& w = c.train.weights;
  auto& f = c.f0;
  return {
      integer("signal.sample_rate", s.sample_rate),
      integer("signal.n_fft", s.n_fft),
      integer("signal.hop", s.hop),
      integer("signal.n_mels", s.n_mels),
      real("signal.f_min", s.f_min),
      real("signal.f_max", s.f_max),
      real("signal.log_floor", s.log_floor),
      real("signal.mel_ridge", s.mel_ridge),
      integer("signal.griffin_lim_iterations", s.griffin_lim_iterations),
      real("signal.silence_db", s.silence_db),
      real("losses.lambda_s", w.lambda_s),
      real("losses.lambda_id", w.lambda_id),
      real("losses.delta", w.delta),
      boolean("losses.literal_cosine", w.literal_cosine),
      integer("train.batch_size", t.batch_size),
      integer("train.steps", t.steps),
      integer("train.g_steps_per_d_step", t.g_steps_per_d_step),
      real("train.lr_g", t.lr_g),
      real("train.lr_d", t.lr_d),
      real("train.adam_beta1", t.adam_beta1),
      real("train.adam_beta2", t.adam_beta2),
      real("train.adam_eps", t.adam_eps),
      real("train.init_std", t.init_std),
      integer("train.power_iterations", t.power_iterations),
      integer("train.seed", t.seed),
      integer("train.checkpoint_interval", t.checkpoint_interval),
      real("eval.frame_seconds", f.frame_seconds),
      real("eval.hop_seconds", f.hop_seconds),
      real("eval.f_floor", f.f_floor),
      real("eval.f_ceil", f.f_ceil),
      real("eval.voicing_threshold", f.voicing_threshold),
      real("eval.peak_tolerance", f.peak_tolerance),
      integer("convert.batch_size", c.convert_batch_size),
  };
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::validate() const {
  const auto& s = signal;
  require(s.sample_rate >= 8000, "signal.sample_rate must be at least 8000");
  require(s.n_fft >= 16 && (s.n_fft & (s.n_fft - 1)) == 0, "signal.n_fft must be a power of two >= 16");
  require(s.hop >= 1 && s.hop <= s.n_fft, "signal.hop must lie in [1, signal.n_fft]");
  require(s.n_mels == signal::kMelBands,
          "signal.n_mels must be " + std::to_string(signal::kMelBands) + " (network input height)");
  require(s.f_min >= 0 && s.f_min < s.f_max, "signal.f_min must lie in [0, signal.f_max)");
  require(s.f_max <= s.sample_rate / 2.0, "signal.f_max must not exceed sample_rate / 2");
  require(s.log_floor > 0, "signal.log_floor must be positive");
  require(s.mel_ridge >= 0, "signal.mel_ridge must be nonnegative");
  require(s.griffin_lim_iterations >= 1, "signal.griffin_lim_iterations must be at least 1");
  require(s.silence_db > 0, "signal.silence_db must be positive");
  train.validate();
  require(f0.frame_seconds > 0, "eval.frame_seconds must be positive");
  require(f0.hop_seconds > 0, "eval.hop_seconds must be positive");
  require(f0.f_floor > 0 && f0.f_floor < f0.f_ceil, "eval.f_floor must lie in (0, eval.f_ceil)");
  require(f0.f_ceil < s.sample_rate / 2.0, "eval.f_ceil must be below sample_rate / 2");
  require(f0.voicing_threshold > 0 && f0.voicing_threshold < 1,
          "eval.voicing_threshold must lie in (0, 1)");
  require(f0.peak_tolerance >= 0, "eval.peak_tolerance must be nonnegative");
  require(convert_batch_size >= 1, "convert.batch_size must be at least 1");
}

std::string RunConfig::echo() const {
  RunConfig copy = *this;
  std::string out;
  for (const auto& e : entries(copy)) out += e.key + " = " + e.get() + "\n";
  return out;
}

signal::MelConfig RunConfig::mel_config() const {
  signal::MelConfig m;
  m.stft.n_fft = signal.n_fft;
  m.stft.hop = signal.hop;
  m.log_floor = signal.log_floor;
  return m;
}

signal::MelFilterbank RunConfig::filterbank() const {
  return signal::MelFilterbank(signal.n_mels, signal.n_fft, signal.sample_rate, signal.f_min,
                               signal.f_max);
}

eval::EvalConfig RunConfig::eval_config() const {
  eval::EvalConfig e;
  e.f0 = f0;
  e.n_fft = signal.n_fft;
  e.f_min = signal.f_min;
  e.f_max = signal.f_max;
  e.log_floor = signal.log_floor;
  e.silence_threshold_db = signal.silence_db;
  return e;
}

std::vector<std::string> config_keys() {
  RunConfig c;
  std::vector<std::string> keys;
  for (const auto& e : entries(c)) keys.push_back(e.key);
  return keys;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  auto table = entries(base);
  std::map<std::string, const Entry*, std::less<>> by_key;
  for (const auto& e : table) by_key.emplace(e.key, &e);
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (auto [prev, fresh] = seen.emplace(std::string(key), line_no); !fresh) {
      throw ConfigError(where + "key '" + std::string(key) + "' already set on line " +
                        std::to_string(prev->second));
    }
    try {
      it->second->set(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace w2sc::app
