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

#include <vector>

#include "w2sc/signal/mel.hpp"

namespace w2sc::signal {

/// Frame energy in dB, computed from the (denormalized) log-mel magnitudes.
std::vector<double> frame_energy_db(const MelSpectrogram& m);

/// True where the frame energy is more than \p threshold_db below the loudest
/// frame of the utterance.
std::vector<bool> frame_silence_mask(const MelSpectrogram& m, double threshold_db = 40.0);

}  // namespace w2sc::signal
