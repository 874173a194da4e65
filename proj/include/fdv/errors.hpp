// Copyright 2026 the fdv authors
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

#ifndef FDV_ERRORS_HPP
#define FDV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdv {

/// Base class for all fdv errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A config or parameter value failed validation. The message names the field.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Requested Doppler shift would drive a beat frequency below zero.
class NegativeBeat : public Error {
 public:
  using Error::Error;
};

/// Scene preset name not recognized.
class UnknownPreset : public Error {
 public:
  using Error::Error;
};

/// Frame contains no valid cells.
class EmptyFrame : public Error {
 public:
  using Error::Error;
};

/// Fewer points than required for a 3-D velocity solve.
class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

/// Paired label sequences have different lengths.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Detection threshold at or above the target speed: every viewing angle is
/// blind, so no finite blind interval exists.
class NoBlindZone : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written, or has a malformed layout.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdv

#endif  // FDV_ERRORS_HPP
