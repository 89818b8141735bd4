// Copyright 2026 The jmldoc Authors.
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

#ifndef JMLDOC_ERROR_HPP
#define JMLDOC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jmldoc {

// 1-based line/column of a byte position in some text.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::string to_string(const SourcePos& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical error in Java-ish source text (unterminated comment/literal).
class LexError : public Error {
 public:
  LexError(const std::string& msg, SourcePos pos)
      : Error(msg + " at " + to_string(pos)), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// Syntax error in a specification block or an invariant dump.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourcePos pos)
      : Error(msg + " at " + to_string(pos)), pos_(pos) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_{};
};

// A recognized JML construct that lies outside the supported subset
// (quantifiers, assignable, visibility modifiers, ...). Kept distinct from
// ParseError so corpora can be triaged.
class UnsupportedConstructError : public ParseError {
 public:
  UnsupportedConstructError(const std::string& construct, SourcePos pos)
      : ParseError("unsupported construct: " + construct, pos) {}
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace jmldoc

#endif  // JMLDOC_ERROR_HPP
