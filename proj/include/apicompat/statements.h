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

// Brace/semicolon-driven statement segmentation of method bodies. This is
// not a Java parser: expressions stay opaque token ranges, and anything the
// segmenter does not recognize becomes a kSimple statement.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apicompat/java_lexer.h"

namespace apicompat::java {

enum class StmtKind {
  kBlock,
  kIf,
  kLoop,    // for, while, do
  kSwitch,
  kTry,
  kCatch,
  kFinally,
  kSynchronized,
  kReturn,
  kThrow,
  kSwitchLabel,
  kLocalClass,
  kLabeled,
  kEmpty,
  kSimple,
};

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool empty() const { return begin >= end; }
  std::span<const Token> of(std::span<const Token> tokens) const {
    return tokens.subspan(begin, end - begin);
  }
};

struct Stmt {
  StmtKind kind = StmtKind::kSimple;
  TokenRange tokens;     // whole statement
  TokenRange header;     // `if (c)`, `catch (E e)`, `try (r)`, `for (...)`
  TokenRange condition;  // inside the header parentheses, if any
  // If: [then, else?]; loops/sync/catch/finally/labeled: [body];
  // Try: [try-block, catch..., finally?]; Block/Switch: statements.
  std::vector<Stmt> children;
  bool has_else = false;

  bool is_control() const {
    return kind == StmtKind::kIf || kind == StmtKind::kLoop || kind == StmtKind::kSwitch;
  }
};

/// Parses the block whose '{' is at `open`. Never throws; unbalanced input
/// is consumed to the end of the range.
Stmt parse_block(std::span<const Token> tokens, std::size_t open);

/// Convenience: lexes `body` (which should start with '{') and parses it.
/// The returned tokens back the ranges in the tree.
struct ParsedBody {
  std::vector<Token> tokens;
  Stmt root;
};
ParsedBody parse_body(std::string_view body);

/// A call expression found in a token range.
struct CallExpr {
  std::string receiver;  // "" for constructors, "this" for unqualified calls
  std::string name;
  int arg_count = 0;
  bool is_constructor = false;
  std::size_t name_token = 0;  // index of the name token
  std::size_t close_paren = 0;
};

/// Finds method and constructor invocations in `range` (nested ones too).
std::vector<CallExpr> find_calls(std::span<const Token> tokens, TokenRange range);

}  // namespace apicompat::java
