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

#include <stdexcept>
#include <string>

namespace w2sc {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied arguments that violate a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tensor or feature shapes do not line up. The message names the stage.
class ShapeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// File could not be opened, read or written, or its contents are malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint file failed validation (magic, version, CRC, truncation, names).
class CorruptCheckpoint : public IoError {
 public:
  using IoError::IoError;
};

/// A NaN or infinity appeared in a computation that must stay finite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Configuration key unknown or value out of range.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Backward pass requested on a tape that was already consumed.
class TapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace w2sc
