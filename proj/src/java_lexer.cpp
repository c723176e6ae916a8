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

#include "apicompat/java_lexer.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "apicompat/error.h"

namespace apicompat::java {

namespace {

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || std::isdigit(c);
}

// Longest first. '>' is deliberately never merged into '>>' so nested
// generic closers stay separate tokens.
constexpr std::string_view kMultiPunct[] = {
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&",
    "||",   "==",  "!=",  "<=",  ">=", "+=", "-=", "*=", "/=",
    "%=",   "&=",  "|=",  "^=",  "<<"};

class Lexer {
 public:
  Lexer(std::string_view src, int first_line) : src_(src), line_(first_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      unsigned char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        continue;
      }
      if (std::isspace(c)) {
        ++pos_;
        continue;
      }
      const std::size_t start = pos_;
      const int start_line = line_;
      TokenKind kind;
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        kind = TokenKind::kLineComment;
      } else if (c == '/' && peek(1) == '*') {
        const bool doc = peek(2) == '*' && peek(3) != '/';
        pos_ += 2;
        while (true) {
          if (pos_ + 1 >= src_.size()) fail(start, "unterminated block comment");
          if (src_[pos_] == '*' && src_[pos_ + 1] == '/') break;
          if (src_[pos_] == '\n') ++line_;
          ++pos_;
        }
        pos_ += 2;
        kind = doc ? TokenKind::kDocComment : TokenKind::kBlockComment;
      } else if (c == '"') {
        if (peek(1) == '"' && peek(2) == '"') {
          scan_text_block(start);
        } else {
          scan_quoted('"', start);
        }
        kind = TokenKind::kString;
      } else if (c == '\'') {
        scan_quoted('\'', start);
        kind = TokenKind::kChar;
      } else if (is_ident_start(c)) {
        while (pos_ < src_.size() && is_ident_part(src_[pos_])) ++pos_;
        kind = TokenKind::kIdentifier;
      } else if (std::isdigit(c) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        scan_number();
        kind = TokenKind::kNumber;
      } else {
        std::size_t len = 1;
        for (std::string_view p : kMultiPunct) {
          if (src_.substr(pos_, p.size()) == p) {
            len = p.size();
            break;
          }
        }
        pos_ += len;
        kind = TokenKind::kPunct;
      }
      out.push_back(Token{kind, src_.substr(start, pos_ - start), start, start_line});
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  [[noreturn]] void fail(std::size_t at, const char* what) const {
    throw Error(ErrorCode::kExtraction,
                std::string(what) + " starting at offset " + std::to_string(at));
  }

  void scan_quoted(char quote, std::size_t start) {
    ++pos_;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        fail(start, quote == '"' ? "unterminated string literal"
                                 : "unterminated char literal");
      }
      if (src_[pos_] == '\\') {
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == quote) {
        ++pos_;
        return;
      }
      ++pos_;
    }
  }

  void scan_text_block(std::size_t start) {
    pos_ += 3;
    while (true) {
      if (pos_ + 2 >= src_.size()) fail(start, "unterminated text block");
      if (src_[pos_] == '\\') {
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == '\n') ++line_;
      if (src_.substr(pos_, 3) == "\"\"\"") {
        pos_ += 3;
        return;
      }
      ++pos_;
    }
  }

  void scan_number() {
    while (pos_ < src_.size()) {
      unsigned char c = src_[pos_];
      if (std::isalnum(c) || c == '_' || c == '.') {
        // Exponent sign: 1e-5, 0x1p+3.
        if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') &&
            (peek(1) == '+' || peek(1) == '-')) {
          pos_ += 2;
          continue;
        }
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

std::vector<Token> lex(std::string_view source, int first_line) {
  return Lexer(source, first_line).run();
}

std::vector<Token> lex_code(std::string_view source, int first_line) {
  std::vector<Token> tokens = lex(source, first_line);
  std::erase_if(tokens, [](const Token& t) { return t.is_comment(); });
  return tokens;
}

std::string normalize_code_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(piece);
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      ++i;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      pending_space = true;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const std::size_t close = text.find("*/", i + 2);
      i = close == std::string_view::npos ? text.size() : close + 2;
      pending_space = true;
    } else if (c == '"' || c == '\'') {
      // Literal copied verbatim, escapes included.
      std::size_t j = i + 1;
      if (c == '"' && text.substr(i, 3) == "\"\"\"") {
        const std::size_t close = text.find("\"\"\"", i + 3);
        j = close == std::string_view::npos ? text.size() : close + 3;
      } else {
        while (j < text.size() && text[j] != c && text[j] != '\n') {
          j += text[j] == '\\' ? 2 : 1;
        }
        j = std::min(j + 1, text.size());
      }
      emit(text.substr(i, j - i));
      i = j;
    } else {
      std::size_t j = i + 1;
      while (j < text.size()) {
        const char d = text[j];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '"' || d == '\'' ||
            (d == '/' && j + 1 < text.size() &&
             (text[j + 1] == '/' || text[j + 1] == '*'))) {
          break;
        }
        ++j;
      }
      emit(text.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (t.is_comment()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(t.text);
  }
  return out;
}

std::string source_text(std::string_view source, std::span<const Token> tokens) {
  if (tokens.empty()) return {};
  const std::size_t begin = tokens.front().offset;
  const std::size_t end = tokens.back().end();
  return normalize_code_text(source.substr(begin, end - begin));
}

std::size_t find_matching(std::span<const Token> tokens, std::size_t open) {
  if (open >= tokens.size()) return tokens.size();
  const std::string_view o = tokens[open].text;
  std::string_view c;
  if (o == "(") c = ")";
  else if (o == "[") c = "]";
  else if (o == "{") c = "}";
  else if (o == "<") c = ">";
  else return tokens.size();
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::kPunct) continue;
    if (t.text == o) {
      ++depth;
    } else if (t.text == c) {
      if (--depth == 0) return i;
    } else if (o == "<" && (t.text == ";" || t.text == "{" || t.text == "(")) {
      // Not a generic argument list after all.
      return tokens.size();
    }
  }
  return tokens.size();
}

bool is_java_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 51> kKeywords = {
      "abstract", "assert",     "boolean",   "break",     "byte",
      "case",     "catch",      "char",      "class",     "const",
      "continue", "default",    "do",        "double",    "else",
      "enum",     "extends",    "final",     "finally",   "float",
      "for",      "goto",       "if",        "implements", "import",
      "instanceof", "int",      "interface", "long",      "native",
      "new",      "package",    "private",   "protected", "public",
      "return",   "short",      "static",    "strictfp",  "super",
      "switch",   "synchronized", "this",    "throw",     "throws",
      "transient", "try",       "void",      "volatile",  "while",
      "yield"};
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

}  // namespace apicompat::java
