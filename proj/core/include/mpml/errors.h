// Copyright 2026 The MPML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mpml {

enum class ErrorKind {
  kConfig,
  kRange,
  kDomain,
  kParse,
  kProtocol,
  kMacCheck,
  kPreprocessingExhausted,
  kConnection,
  kNumerical,
};

// Base of every error thrown by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ErrorKind::kRange, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(ErrorKind::kParse, what) {}
};

// Protocol deviation that is not a MAC failure: round skew, material reuse,
// malformed frames, commitment mismatch.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::kProtocol, what) {}
};

class MacCheckError : public Error {
 public:
  explicit MacCheckError(const std::string& what)
      : Error(ErrorKind::kMacCheck, what) {}
};

class PreprocessingExhausted : public Error {
 public:
  explicit PreprocessingExhausted(const std::string& what)
      : Error(ErrorKind::kPreprocessingExhausted, what) {}
};

class ConnectionError : public Error {
 public:
  explicit ConnectionError(const std::string& what)
      : Error(ErrorKind::kConnection, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

#define MPML_ENFORCE(cond, ErrType, msg) \
  do {                                   \
    if (!(cond)) throw ErrType(msg);     \
  } while (0)

}  // namespace mpml
