/*
 * Copyright 2026 The strongset Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STRONGSET_ERROR_HPP_
#define STRONGSET_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace strongset {

// Error categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  kValidation,  // exit 2
  kParse,       // exit 3
  kIo,          // exit 4
  kNotFound,    // exit 2
  kDomain,      // exit 2
  kUndefined,   // exit 2
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

// Carries the 1-based line (row) number of the offending input, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(ErrorKind::kParse,
              line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::kIo, message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message)
      : Error(ErrorKind::kNotFound, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::kDomain, message) {}
};

// A statistic has no defined value for the given input (e.g. AUC with an
// empty side, priors of an empty corpus).
class UndefinedError : public Error {
 public:
  explicit UndefinedError(const std::string& message)
      : Error(ErrorKind::kUndefined, message) {}
};

}  // namespace strongset

#endif  // STRONGSET_ERROR_HPP_
