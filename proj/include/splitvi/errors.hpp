// Copyright 2026 The splitvi Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitvi {

/// Thrown when a vector or matrix argument does not have the dimension the
/// callee requires. Carries both dimensions so callers can report precisely.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& where, std::size_t expected, std::size_t actual)
      : std::invalid_argument(where + ": dimension mismatch: expected " +
                              std::to_string(expected) + ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Thrown when a solver configuration violates a step-size or schedule bound.
/// The message names the violated bound (e.g. "gamma >= 1/L").
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown by the problem-file loader on malformed input. The message carries
/// file/field diagnostics.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace splitvi
