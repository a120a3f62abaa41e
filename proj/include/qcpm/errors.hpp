// Copyright 2026 The QCPM Authors
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

namespace qcpm {

// Argument outside the mathematical domain of an operation (|x| > 1, a point
// outside its box, log of a non-positive bound).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Qubit counts, extension sizes or parameter counts outside supported range.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Invalid qubit index, repeated index, or gate arity mismatch.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Structurally invalid input data (lengths, non-negativity, normalization).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcpm
