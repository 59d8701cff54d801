// Copyright 2026 The geoik Authors
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

namespace geoik {

enum class ErrorKind {
  ParallelLines,
  DimensionMismatch,
  IndexOutOfRange,
  DegenerateChain,
  UnsupportedJointCount,
  LockRequired,
  DegenerateAxes,
  DegenerateInput,
  DegenerateWrist,
  UnsolvableClass,
  InvalidArgument,
  ParseError,
  ValidationError,
  UnsupportedJointType,
  PathNotFound,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParallelLines: return "ParallelLines";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DegenerateChain: return "DegenerateChain";
    case ErrorKind::UnsupportedJointCount: return "UnsupportedJointCount";
    case ErrorKind::LockRequired: return "LockRequired";
    case ErrorKind::DegenerateAxes: return "DegenerateAxes";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::DegenerateWrist: return "DegenerateWrist";
    case ErrorKind::UnsolvableClass: return "UnsolvableClass";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnsupportedJointType: return "UnsupportedJointType";
    case ErrorKind::PathNotFound: return "PathNotFound";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace geoik
