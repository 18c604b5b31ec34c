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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "w2sc/train/trainer.hpp"

namespace w2sc::train {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

struct CheckpointFile {
  std::uint64_t step = 0;
  std::vector<CheckpointTensor> tensors;
};

/// Named tensors of a state in file order.
CheckpointFile snapshot(const TrainState& state);

void write_checkpoint_file(const std::filesystem::path& path, const CheckpointFile& file);
/// Throws CorruptCheckpoint on a bad magic, version, checksum or a truncated file.
CheckpointFile read_checkpoint_file(const std::filesystem::path& path);

void save_checkpoint(const TrainState& state, const std::filesystem::path& path);

/// Restores every tensor of \p state from \p path. Throws CorruptCheckpoint
/// for unknown, missing or mis-shaped tensors.
void load_checkpoint(const std::filesystem::path& path, TrainState& state);

}  // namespace w2sc::train
