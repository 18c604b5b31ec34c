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
#include "w2sc/train/checkpoint.hpp"

#include <zlib.h>

#include <map>

#include "common/binary_io.hpp"
#include "w2sc/error.hpp"

namespace w2sc::train {
namespace {

constexpr std::string_view kMagic = "W2SC-CKPT";
// Adam step counts are stored as float and must stay exact.
constexpr std::uint64_t kMaxExactStep = 1ull << 24;

std::uint32_t crc32_of(const char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

// Live handles of every tensor that is both saved and restored.
ad::TensorList<float> live_tensors(const TrainState& st) {
  ad::TensorList<float> out;
  ad::append_prefixed(out, "G", st.g.parameters());
  ad::append_prefixed(out, "S", st.s.parameters());
  ad::append_prefixed(out, "D", st.d.parameters());
  ad::append_prefixed(out, "D", st.d.buffers());
  ad::append_prefixed(out, "opt.G", st.opt_g.state());
  ad::append_prefixed(out, "opt.S", st.opt_s.state());
  ad::append_prefixed(out, "opt.D", st.opt_d.state());
  return out;
}

CheckpointTensor from_tensor(const std::string& name, const ad::Tensor<float>& t) {
  CheckpointTensor c;
  c.name = name;
  for (std::size_t d : t.shape()) c.dims.push_back(static_cast<std::uint32_t>(d));
  c.data.assign(t.values().begin(), t.values().end());
  return c;
}

CheckpointTensor vector_tensor(const std::string& name, std::vector<float> data) {
  return {name, {static_cast<std::uint32_t>(data.size())}, std::move(data)};
}

const std::pair<const char*, const ad::Adam<float> TrainState::*> kOptimizers[] = {
    {"opt.G.step", &TrainState::opt_g},
    {"opt.S.step", &TrainState::opt_s},
    {"opt.D.step", &TrainState::opt_d},
};

}  // namespace

CheckpointFile snapshot(const TrainState& st) {
  CheckpointFile f;
  f.step = st.step;
  for (const auto& p : live_tensors(st)) f.tensors.push_back(from_tensor(p.name, p.tensor));
  for (const auto& [name, opt] : kOptimizers) {
    const std::uint64_t n = (st.*opt).steps();
    if (n >= kMaxExactStep) throw InvalidArgument("checkpoint: optimizer step count too large");
    f.tensors.push_back(vector_tensor(name, {static_cast<float>(n)}));
  }
  f.tensors.push_back(vector_tensor("norm.whisper", {st.whisper_norm.min, st.whisper_norm.max}));
  f.tensors.push_back(vector_tensor("norm.normal", {st.normal_norm.min, st.normal_norm.max}));
  std::vector<float> echo;
  for (unsigned char ch : st.config_echo) echo.push_back(static_cast<float>(ch));
  f.tensors.push_back(vector_tensor("config.echo", std::move(echo)));
  return f;
}

void write_checkpoint_file(const std::filesystem::path& path, const CheckpointFile& file) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u32(kCheckpointVersion);
  w.u64(file.step);
  w.u32(static_cast<std::uint32_t>(file.tensors.size()));
  for (const auto& t : file.tensors) {
    if (t.name.size() > 0xffff) throw InvalidArgument("checkpoint: tensor name too long");
    if (t.dims.size() > 0xff) throw InvalidArgument("checkpoint: tensor rank too large");
    std::size_t n = 1;
    for (auto d : t.dims) n *= d;
    if (n != t.data.size()) throw ShapeError("checkpoint: " + t.name + " dims do not match data");
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.bytes(t.name);
    w.u8(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) w.u32(d);
    for (float v : t.data) w.f32(v);
  }
  w.u32(crc32_of(w.buffer().data(), w.size()));
  // Write then rename, so a reader never sees a half-written file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  detail::write_file(tmp.string(), w.buffer());
  std::filesystem::rename(tmp, path);
}

CheckpointFile read_checkpoint_file(const std::filesystem::path& path) {
  std::vector<char> bytes;
  try {
    bytes = detail::read_file(path.string());
  } catch (const IoError& e) {
    throw CorruptCheckpoint(e.what());
  }
  const std::string ctx = "checkpoint " + path.string();
  if (bytes.size() < kMagic.size() + 4 || std::string_view(bytes.data(), kMagic.size()) != kMagic)
    throw CorruptCheckpoint(ctx + ": bad magic");
  detail::ByteReader<CorruptCheckpoint> r(bytes, ctx);
  r.bytes(kMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw CorruptCheckpoint(ctx + ": unsupported version " + std::to_string(version));
  if (bytes.size() < kMagic.size() + 4 + 4) throw CorruptCheckpoint(ctx + ": unexpected end of data");
  const std::size_t body = bytes.size() - 4;
  detail::ByteReader<CorruptCheckpoint> tail(std::span<const char>(bytes).subspan(body), ctx);
  if (tail.u32() != crc32_of(bytes.data(), body)) throw CorruptCheckpoint(ctx + ": checksum mismatch");

  detail::ByteReader<CorruptCheckpoint> rb(std::span<const char>(bytes).first(body), ctx);
  rb.bytes(kMagic.size() + 4);
  CheckpointFile f;
  f.step = rb.u64();
  const std::uint32_t count = rb.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointTensor t;
    const std::uint16_t len = rb.u16();
    t.name = std::string(rb.bytes(len));
    const std::uint8_t rank = rb.u8();
    std::size_t n = 1;
    for (std::uint8_t k = 0; k < rank; ++k) {
      t.dims.push_back(rb.u32());
      n *= t.dims.back();
    }
    if (n > rb.remaining() / 4) throw CorruptCheckpoint(ctx + ": unexpected end of data");
    t.data.resize(n);
    for (float& v : t.data) v = rb.f32();
    f.tensors.push_back(std::move(t));
  }
  if (rb.remaining() != 0) throw CorruptCheckpoint(ctx + ": trailing bytes");
  return f;
}

void save_checkpoint(const TrainState& state, const std::filesystem::path& path) {
  write_checkpoint_file(path, snapshot(state));
}

void load_checkpoint(const std::filesystem::path& path, TrainState& st) {
  const CheckpointFile f = read_checkpoint_file(path);
  const std::string ctx = "checkpoint " + path.string();
  std::map<std::string, const CheckpointTensor*> by_name;
  for (const auto& t : f.tensors) {
    if (!by_name.emplace(t.name, &t).second) throw CorruptCheckpoint(ctx + ": duplicate tensor " + t.name);
  }
  auto take = [&](const std::string& name) -> const CheckpointTensor& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw CorruptCheckpoint(ctx + ": missing tensor " + name);
    const CheckpointTensor* t = it->second;
    by_name.erase(it);
    return *t;
  };
  auto take_vector = [&](const std::string& name, std::size_t n) -> const CheckpointTensor& {
    const CheckpointTensor& t = take(name);
    if (t.dims.size() != 1 || (n != 0 && t.dims[0] != n))
      throw CorruptCheckpoint(ctx + ": tensor " + name + " has the wrong shape");
    return t;
  };

  // Validate everything before touching the state.
  std::vector<std::pair<ad::Tensor<float>, const CheckpointTensor*>> assign;
  for (const auto& p : live_tensors(st)) {
    const CheckpointTensor& t = take(p.name);
    const auto& shape = p.tensor.shape();
    bool ok = t.dims.size() == shape.size();
    for (std::size_t k = 0; ok && k < shape.size(); ++k) ok = t.dims[k] == shape[k];
    if (!ok) throw CorruptCheckpoint(ctx + ": tensor " + p.name + " has the wrong shape");
    assign.emplace_back(p.tensor, &t);
  }
  std::uint64_t steps[3];
  for (int i = 0; i < 3; ++i) {
    const float v = take_vector(kOptimizers[i].first, 1).data[0];
    if (!(v >= 0) || v >= static_cast<float>(kMaxExactStep) || v != static_cast<float>(static_cast<std::uint64_t>(v)))
      throw CorruptCheckpoint(ctx + ": bad optimizer step count");
    steps[i] = static_cast<std::uint64_t>(v);
  }
  const auto& nw = take_vector("norm.whisper", 2).data;
  const auto& nn_ = take_vector("norm.normal", 2).data;
  const auto& echo = take_vector("config.echo", 0).data;
  if (!by_name.empty()) throw CorruptCheckpoint(ctx + ": unknown tensor " + by_name.begin()->first);

  for (auto& [tensor, src] : assign) std::copy(src->data.begin(), src->data.end(), tensor.values().begin());
  st.opt_g.set_steps(steps[0]);
  st.opt_s.set_steps(steps[1]);
  st.opt_d.set_steps(steps[2]);
  st.whisper_norm = {nw[0], nw[1]};
  st.normal_norm = {nn_[0], nn_[1]};
  st.config_echo.clear();
  for (float c : echo) st.config_echo.push_back(static_cast<char>(static_cast<unsigned char>(c)));
  st.step = f.step;
}

}  // namespace w2sc::train
