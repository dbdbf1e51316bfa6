// Copyright 2026 The creditis Authors
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

namespace creditis {

enum class ErrorKind {
  kInvalidArgument,
  kDomain,
  kConfig,
  kNumerical,
  kDegeneratePilot,
  kIo,
};

/// Base of every exception thrown by the library. The kind maps one-to-one
/// onto the status codes of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

/// Parameter outside the support or domain of a function or distribution.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

/// Configuration text that fails to parse or validate. `line` is 1-based,
/// 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(ErrorKind::kConfig,
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}

 protected:
  NumericalError(ErrorKind kind, const std::string& what) : Error(kind, what) {}
};

/// No pilot sample carries positive payoff, so the conjugate measure is
/// undefined.
class DegeneratePilot : public NumericalError {
 public:
  explicit DegeneratePilot(const std::string& what)
      : NumericalError(ErrorKind::kDegeneratePilot, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace creditis
