// Copyright 2026 The HVAW-D Authors. All Rights Reserved.
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

#ifndef HVAWD_ERRORS_H_
#define HVAWD_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hvawd {

// Bad caller input: dimensions, ranges, malformed configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The predict/commit protocol was violated (double predict, stale ticket).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numeric quantity became non-finite. `step` is the 1-based stream step
// when known, 0 otherwise.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::int64_t step = 0)
      : std::runtime_error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stream file row failed to parse. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::int64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

// Rows of one stream disagree on the feature dimension.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hvawd

#endif  // HVAWD_ERRORS_H_
