/*
 * Copyright (C) 2026 The apicompat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apicompat::java {

enum class TokenKind {
  kIdentifier,  // also keywords; callers compare text
  kNumber,
  kString,
  kChar,
  kPunct,
  kLineComment,
  kBlockComment,
  kDocComment,
};

struct Token {
  TokenKind kind;
  std::string_view text;  // view into the lexed source
  std::size_t offset;
  int line;

  std::size_t end() const { return offset + text.size(); }
  bool is(std::string_view s) const {
    return (kind == TokenKind::kPunct || kind == TokenKind::kIdentifier) &&
           text == s;
  }
  bool is_comment() const {
    return kind == TokenKind::kLineComment ||
           kind == TokenKind::kBlockComment || kind == TokenKind::kDocComment;
  }
};

/// Tokenizes Java source. Comments are kept as tokens. Throws
/// Error(kExtraction) on unterminated comments or literals.
std::vector<Token> lex(std::string_view source, int first_line = 1);

/// Same as lex() with comment tokens dropped.
std::vector<Token> lex_code(std::string_view source, int first_line = 1);

/// Strips comments (literal-aware), collapses whitespace runs outside
/// literals to one space, trims.
std::string normalize_code_text(std::string_view text);

/// Joins token texts with single spaces; the formatting-independent form
/// used for statement comparisons.
std::string join_tokens(std::span<const Token> tokens);

/// Source slice covered by `tokens`, normalized with normalize_code_text.
std::string source_text(std::string_view source, std::span<const Token> tokens);

/// Index of the token matching the opener at `open` ((, [, {, <), or
/// tokens.size() if unbalanced.
std::size_t find_matching(std::span<const Token> tokens, std::size_t open);

bool is_java_keyword(std::string_view word);

}  // namespace apicompat::java
