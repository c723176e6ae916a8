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

#include "apicompat/statements.h"

#include <algorithm>

namespace apicompat::java {

namespace {

class StmtParser {
 public:
  explicit StmtParser(std::span<const Token> tokens) : t_(tokens) {}

  Stmt block(std::size_t open, std::size_t limit) {
    std::size_t close = find_matching(t_, open);
    if (close >= limit) close = limit;  // unbalanced: run to the end
    Stmt b;
    b.kind = StmtKind::kBlock;
    b.tokens = {open, std::min(close + 1, limit)};
    i_ = open + 1;
    while (i_ < close) {
      const std::size_t before = i_;
      b.children.push_back(statement(close));
      if (i_ == before) ++i_;
    }
    i_ = std::min(close + 1, limit);
    return b;
  }

 private:
  bool at(std::string_view s) const { return i_ < t_.size() && t_[i_].is(s); }
  bool at(std::size_t k, std::string_view s) const { return k < t_.size() && t_[k].is(s); }

  // Parenthesized header at i_; fills header/condition and moves past ')'.
  void paren_header(Stmt& s, std::size_t start, std::size_t end) {
    if (!at("(")) {
      s.header = {start, i_};
      return;
    }
    std::size_t close = find_matching(t_, i_);
    if (close >= end) close = end - 1;
    s.condition = {i_ + 1, close};
    s.header = {start, close + 1};
    i_ = close + 1;
  }

  Stmt nested(std::size_t end) {
    if (i_ >= end) {
      Stmt empty;
      empty.kind = StmtKind::kEmpty;
      empty.tokens = {i_, i_};
      return empty;
    }
    return statement(end);
  }

  Stmt statement(std::size_t end) {
    const std::size_t start = i_;
    Stmt s;
    const Token& tok = t_[i_];
    if (tok.is("{")) {
      return block(i_, end);
    }
    if (tok.is(";")) {
      s.kind = StmtKind::kEmpty;
      ++i_;
    } else if (tok.is("if")) {
      s.kind = StmtKind::kIf;
      ++i_;
      paren_header(s, start, end);
      s.children.push_back(nested(end));
      if (i_ < end && at("else")) {
        ++i_;
        s.has_else = true;
        s.children.push_back(nested(end));
      }
    } else if (tok.is("for") || tok.is("while") ||
               (tok.is("synchronized") && at(i_ + 1, "("))) {
      s.kind = tok.is("synchronized") ? StmtKind::kSynchronized : StmtKind::kLoop;
      ++i_;
      paren_header(s, start, end);
      s.children.push_back(nested(end));
    } else if (tok.is("do")) {
      s.kind = StmtKind::kLoop;
      ++i_;
      s.children.push_back(nested(end));
      if (i_ < end && at("while")) {
        const std::size_t w = i_;
        ++i_;
        paren_header(s, w, end);
      }
      if (i_ < end && at(";")) ++i_;
    } else if (tok.is("switch") && at(i_ + 1, "(")) {
      s.kind = StmtKind::kSwitch;
      ++i_;
      paren_header(s, start, end);
      if (i_ < end && at("{")) {
        Stmt body = block(i_, end);
        s.children = std::move(body.children);
      }
    } else if (tok.is("try")) {
      s.kind = StmtKind::kTry;
      ++i_;
      paren_header(s, start, end);
      if (i_ < end && at("{")) s.children.push_back(block(i_, end));
      while (i_ < end && at("catch")) {
        Stmt c;
        c.kind = StmtKind::kCatch;
        const std::size_t cs = i_;
        ++i_;
        paren_header(c, cs, end);
        if (i_ < end && at("{")) c.children.push_back(block(i_, end));
        c.tokens = {cs, i_};
        s.children.push_back(std::move(c));
      }
      if (i_ < end && at("finally")) {
        Stmt f;
        f.kind = StmtKind::kFinally;
        const std::size_t fs = i_;
        ++i_;
        f.header = {fs, i_};
        if (i_ < end && at("{")) f.children.push_back(block(i_, end));
        f.tokens = {fs, i_};
        s.children.push_back(std::move(f));
      }
    } else if (tok.is("return") || tok.is("throw")) {
      s.kind = tok.is("return") ? StmtKind::kReturn : StmtKind::kThrow;
      simple(end);
    } else if ((tok.is("case") || tok.is("default")) &&
               (tok.is("case") || at(i_ + 1, ":") || at(i_ + 1, "->"))) {
      s.kind = StmtKind::kSwitchLabel;
      int depth = 0;
      while (i_ < end) {
        const Token& x = t_[i_];
        if (x.is("(") || x.is("[") || x.is("{")) ++depth;
        if (x.is(")") || x.is("]") || x.is("}")) depth = std::max(0, depth - 1);
        ++i_;
        if (depth == 0 && (x.is(":") || x.is("->"))) break;
      }
      s.header = {start, i_};
    } else if (is_local_class_start()) {
      s.kind = StmtKind::kLocalClass;
      while (i_ < end && !at("{")) ++i_;
      if (i_ < end) {
        const std::size_t close = find_matching(t_, i_);
        i_ = close < end ? close + 1 : end;
      }
    } else if (tok.kind == TokenKind::kIdentifier && !is_java_keyword(tok.text) &&
               at(i_ + 1, ":")) {
      s.kind = StmtKind::kLabeled;
      i_ += 2;
      s.header = {start, i_};
      s.children.push_back(nested(end));
    } else {
      s.kind = StmtKind::kSimple;
      simple(end);
    }
    if (i_ == start) ++i_;
    s.tokens = {start, std::min(i_, end)};
    return s;
  }

  bool is_local_class_start() const {
    std::size_t k = i_;
    while (k < t_.size() && (t_[k].is("final") || t_[k].is("abstract") ||
                             t_[k].is("static") || t_[k].is("strictfp"))) {
      ++k;
    }
    if (at(k, "class") || at(k, "interface") || at(k, "enum")) return true;
    return at(k, "record") && k + 2 < t_.size() &&
           t_[k + 1].kind == TokenKind::kIdentifier && t_[k + 2].is("(");
  }

  void simple(std::size_t end) {
    int depth = 0;
    while (i_ < end) {
      const Token& x = t_[i_];
      if (x.kind == TokenKind::kPunct) {
        if (x.text == "(" || x.text == "[" || x.text == "{") {
          ++depth;
        } else if (x.text == ")" || x.text == "]") {
          depth = std::max(0, depth - 1);
        } else if (x.text == "}") {
          if (depth == 0) return;
          --depth;
        } else if (x.text == ";" && depth == 0) {
          ++i_;
          return;
        }
      }
      ++i_;
    }
  }

  std::span<const Token> t_;
  std::size_t i_ = 0;
};

// Walks back from the token before a '.' to the start of a primary chain
// like `a.b(c).d[e]`. Returns the index of its first token.
std::size_t receiver_start(std::span<const Token> t, std::size_t dot, std::size_t floor) {
  std::size_t j = dot;  // t[j] == "."
  std::size_t first = dot;
  while (j > floor) {
    std::size_t k = j - 1;
    // Optional call/index suffixes.
    while (t[k].is(")") || t[k].is("]")) {
      const std::string_view open = t[k].is(")") ? "(" : "[";
      const std::string_view close = t[k].text;
      int depth = 0;
      std::size_t m = k;
      while (true) {
        if (t[m].is(close)) ++depth;
        if (t[m].is(open) && --depth == 0) break;
        if (m == floor) return first;
        --m;
      }
      if (m == floor) return first;
      k = m - 1;
    }
    const Token& x = t[k];
    if (x.kind == TokenKind::kIdentifier || x.kind == TokenKind::kString ||
        x.kind == TokenKind::kNumber) {
      first = k;
      if (k > floor && t[k - 1].is(".")) {
        j = k - 1;
        continue;
      }
    }
    break;
  }
  return first;
}

}  // namespace

Stmt parse_block(std::span<const Token> tokens, std::size_t open) {
  StmtParser p(tokens);
  return p.block(open, tokens.size());
}

ParsedBody parse_body(std::string_view body) {
  ParsedBody out;
  out.tokens = lex_code(body);
  if (out.tokens.empty() || !out.tokens.front().is("{")) {
    out.root.kind = StmtKind::kBlock;
    out.root.tokens = {0, out.tokens.size()};
    return out;
  }
  out.root = parse_block(out.tokens, 0);
  return out;
}

std::vector<CallExpr> find_calls(std::span<const Token> t, TokenRange range) {
  std::vector<CallExpr> out;
  const std::size_t end = std::min(range.end, t.size());
  for (std::size_t k = range.begin; k < end; ++k) {
    const Token& name = t[k];
    if (name.kind != TokenKind::kIdentifier) continue;
    std::size_t paren = k + 1;
    if (paren < end && t[paren].is("<")) {
      // new Foo<Bar>(...)
      const std::size_t close = find_matching(t, paren);
      if (close < end) paren = close + 1;
    }
    if (paren >= end || !t[paren].is("(")) continue;
    if (is_java_keyword(name.text) && !name.is("super") && !name.is("this")) continue;
    if (name.is("super") || name.is("this")) continue;  // explicit ctor calls
    if (k > range.begin && t[k - 1].is("@")) continue;    // annotation arguments

    CallExpr call;
    call.name = std::string(name.text);
    call.name_token = k;
    const std::size_t close = find_matching(t, paren);
    call.close_paren = close < end ? close : end;
    int depth = 0;
    bool any = false;
    for (std::size_t a = paren + 1; a < call.close_paren; ++a) {
      any = true;
      if (t[a].is("(") || t[a].is("[") || t[a].is("{")) ++depth;
      if (t[a].is(")") || t[a].is("]") || t[a].is("}")) --depth;
      if (t[a].is(",") && depth == 0) ++call.arg_count;
    }
    if (any) ++call.arg_count;

    // Qualified constructor: new a.b.C(...)
    std::size_t q = k;
    while (q >= range.begin + 2 && t[q - 1].is(".") &&
           t[q - 2].kind == TokenKind::kIdentifier) {
      q -= 2;
    }
    if (q > range.begin && t[q - 1].is("new")) {
      call.is_constructor = true;
      for (std::size_t m = q; m + 1 < k; ++m) call.receiver.append(t[m].text);
    } else if (k > range.begin && t[k - 1].is(".")) {
      const std::size_t first = receiver_start(t, k - 1, range.begin);
      for (std::size_t m = first; m < k - 1; ++m) call.receiver.append(t[m].text);
      if (call.receiver.empty()) call.receiver = "?";
    } else {
      call.receiver = "this";
    }
    out.push_back(std::move(call));
  }
  return out;
}

}  // namespace apicompat::java
