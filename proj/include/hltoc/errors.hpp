// Copyright 2026 The hltoc Authors
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

namespace hltoc {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  kDomain,       // argument outside the mathematical domain of an operation
  kStructural,   // dimension or layout mismatch
  kEvaluation,   // non-finite residual or Jacobian entry
  kSingular,     // near-zero denominator / singular system
  kConfig,       // invalid experiment configuration
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what)
      : Error(ErrorKind::kStructural, what) {}
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorKind::kSingular, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// Raised when a level evaluator produces a NaN/Inf. Carries the level and
/// row so the failing residual can be located.
class EvaluationError : public Error {
 public:
  EvaluationError(int level, int row, const std::string& what)
      : Error(ErrorKind::kEvaluation, what), level_(level), row_(row) {}
  int level() const noexcept { return level_; }
  int row() const noexcept { return row_; }

 private:
  int level_;
  int row_;
};

}  // namespace hltoc
