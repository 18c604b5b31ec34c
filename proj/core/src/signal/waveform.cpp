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
#include "w2sc/signal/waveform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "w2sc/error.hpp"

namespace w2sc::signal {
namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  os.write(b.data(), 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b.data(), 2);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

Waveform load_wav(const std::filesystem::path& path, int target_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) {
    return IoError("malformed WAV file " + path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("missing RIFF/WAVE header");
  }

  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw fail("short fmt chunk");
      std::uint16_t format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible && size >= 40) {
        format = read_u16(bytes.data() + body + 24);
      }
      if (format != kFormatPcm || bits != 16) {
        throw IoError("unsupported WAV encoding in " + path.string() +
                      " (only 16-bit PCM is supported)");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw fail("no fmt chunk before data");
  if (data == nullptr) throw fail("no data chunk");
  if (channels == 0 || rate == 0) throw fail("zero channels or sample rate");

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t n = data_size / frame_bytes;
  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::int16_t>(read_u16(data + i * frame_bytes));
    w.samples[i] = static_cast<double>(v) / 32768.0;
  }
  if (target_rate > 0 && target_rate != w.sample_rate) return resample(w, target_rate);
  return w;
}

void save_wav(const std::filesystem::path& path, const Waveform& w) {
  if (w.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write WAV file: " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.write("data", 4);
  put_u32(out, data_bytes);
  for (double s : w.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(std::clamp(c * 32768.0, -32768.0, 32767.0)));
    put_u16(out, static_cast<std::uint16_t>(q));
  }
  if (!out) throw IoError("failed writing WAV file: " + path.string());
}

Waveform resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0 || w.sample_rate <= 0) {
    throw InvalidArgument("resample: sample rates must be positive");
  }
  if (target_rate == w.sample_rate) return w;
  const double ratio = static_cast<double>(target_rate) / w.sample_rate;
  const auto out_len = static_cast<std::size_t>(std::llround(w.samples.size() * ratio));
  // Cutoff relative to the input Nyquist; below 1 when decimating.
  const double cutoff = std::min(1.0, ratio) * 0.97;
  constexpr double kZeroCrossings = 16.0;
  const double half_width = kZeroCrossings / cutoff;

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.assign(out_len, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  for (std::size_t m = 0; m < out_len; ++m) {
    const double t = static_cast<double>(m) / ratio;
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
    const auto hi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) {
      const double d = t - static_cast<double>(k);
      const double x = cutoff * d;
      const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double win = 0.5 + 0.5 * std::cos(std::numbers::pi * d / half_width);
      acc += w.samples[static_cast<std::size_t>(k)] * cutoff * sinc * win;
    }
    out.samples[m] = acc;
  }
  return out;
}

double rms(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : w.samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(w.samples.size()));
}

}  // namespace w2sc::signal
