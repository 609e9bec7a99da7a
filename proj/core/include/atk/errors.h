// Copyright 2026 The ATK Authors
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

#ifndef ATK_ERRORS_H_
#define ATK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atk {

// Base class for all recoverable errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lexicon was empty or contained a reserved marker token.
class InvalidLexicon : public Error {
 public:
  using Error::Error;
};

// No non-overlapping span assignment covers every constraint.
class ConstraintNotFound : public Error {
 public:
  explicit ConstraintNotFound(std::size_t index)
      : Error("constraint " + std::to_string(index) +
              " has no non-overlapping occurrence in the target"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Template placeholders are inconsistent with the constraint count.
class SlotMismatch : public Error {
 public:
  using Error::Error;
};

class NotEnoughEligible : public Error {
 public:
  NotEnoughEligible(std::size_t requested, std::size_t available)
      : Error("requested " + std::to_string(requested) +
              " keywords but only " + std::to_string(available) +
              " eligible tokens"),
        requested_(requested),
        available_(available) {}
  std::size_t requested() const { return requested_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t requested_;
  std::size_t available_;
};

// Malformed input record. line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

}  // namespace atk

#endif  // ATK_ERRORS_H_
