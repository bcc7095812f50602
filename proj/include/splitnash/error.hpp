// Copyright 2026 The SplitNash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace splitnash {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector, matrix or profile sizes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An evaluator produced a non-finite value or was called outside its domain
// (for example a fractional power of a negative base).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid construction data: budgets, intervals, games, models.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A profile that does not lie in the game's strategy box.
class InfeasibleProfile : public Error {
 public:
  using Error::Error;
};

// The operator image of a profile left the target game's profile box.
class RelatednessViolation : public Error {
 public:
  using Error::Error;
};

// Syntax error in a utility expression; offset is a byte offset into the
// source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace splitnash
