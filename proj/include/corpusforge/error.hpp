// Copyright 2026 The CorpusForge Authors.
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

#ifndef CORPUSFORGE_ERROR_HPP_
#define CORPUSFORGE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corpusforge {

// Values double as process exit codes and as the C API status codes.
enum class ErrorKind : int {
  kInternal = 1,
  kConfig = 2,  // invalid configuration or argument
  kData = 3,    // malformed or inconsistent input data
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
  // Record-level failure; line numbers are 1-based.
  DataError(const std::string& what, std::size_t line)
      : Error(ErrorKind::kData, "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace corpusforge

#endif  // CORPUSFORGE_ERROR_HPP_
