// Copyright 2026-present the vecsql authors
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
#include <vector>

#include "vecsql/ast.hpp"

namespace vecsql::sql {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Raised for constructs the dialect deliberately excludes (set operations,
/// DISTINCT, window functions, recursive CTEs, DML).
class UnsupportedConstructError : public ParseError {
 public:
  using ParseError::ParseError;
};

enum class TokenKind {
  Identifier,
  Keyword,
  IntLiteral,
  RealLiteral,
  StringLiteral,
  Placeholder,  // ?N
  Symbol,       // punctuation and operators
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // keywords uppercased; strings unescaped
  int line = 1;
  int column = 1;
};

/// Lexes the full input. Token positions are 1-based; the trailing End
/// token carries the position just past the input.
std::vector<Token> tokenize(const std::string& text);

/// Parses one canonical VectorSQL statement (an optional trailing ';' is
/// consumed). Throws ParseError / UnsupportedConstructError.
VectorSqlQuery parse(const std::string& text);

}  // namespace vecsql::sql
