// Copyright 2026 The edgeblend Authors
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

#ifndef EDGEBLEND_ERROR_HPP_
#define EDGEBLEND_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace edgeblend {

// Base of every exception thrown by the library. The CLI maps the concrete
// type to its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed files, inconsistent dimensions, invalid graphs or clusterings.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite objective values and other numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised by the file readers; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace edgeblend

#endif  // EDGEBLEND_ERROR_HPP_
