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

#include "apicompat/java_source.h"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "apicompat/error.h"

namespace apicompat::java {

namespace {

constexpr std::array<std::string_view, 15> kModifiers = {
    "public", "protected", "private", "static",       "final",
    "abstract", "native",  "synchronized", "transient", "volatile",
    "strictfp", "default", "sealed",  "non-sealed",   "transitive"};

bool is_modifier(std::string_view w) {
  return std::find(kModifiers.begin(), kModifiers.end(), w) != kModifiers.end();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class UnitParser {
 public:
  explicit UnitParser(std::string_view source) : src_(source) {
    unit_.tokens = lex(source);
    for (std::size_t k = 0; k < unit_.tokens.size(); ++k) {
      if (!unit_.tokens[k].is_comment()) {
        code_.push_back(unit_.tokens[k]);
        full_index_.push_back(k);
      }
    }
  }

  CompilationUnit run() {
    while (i_ < code_.size()) {
      if (at("package")) {
        const std::size_t semi = find_semicolon(i_);
        unit_.package_name = concat(i_ + 1, semi);
        i_ = semi + 1;
      } else if (at("import")) {
        const std::size_t semi = find_semicolon(i_);
        if (!(i_ + 1 < semi && code_[i_ + 1].is("static"))) {
          unit_.imports.push_back(concat(i_ + 1, semi));
        }
        i_ = semi + 1;
      } else if (at(";")) {
        ++i_;
      } else {
        const std::size_t before = i_;
        parse_member(kNoOwner, "", true);
        if (i_ == before) ++i_;
      }
    }
    unit_.tokens.clear();
    unit_.tokens = std::move(code_);
    // Body token indices were recorded against code_, which is now
    // unit_.tokens.
    return std::move(unit_);
  }

 private:
  static constexpr std::size_t kNoOwner = static_cast<std::size_t>(-1);

  bool at(std::string_view s) const { return i_ < code_.size() && code_[i_].is(s); }
  bool at(std::size_t k, std::string_view s) const {
    return k < code_.size() && code_[k].is(s);
  }

  [[noreturn]] void fail(const std::string& what) const {
    const int line = i_ < code_.size() ? code_[i_].line
                                       : (code_.empty() ? 1 : code_.back().line);
    throw Error(ErrorCode::kExtraction, what + " near line " + std::to_string(line));
  }

  std::size_t find_semicolon(std::size_t from) const {
    std::size_t k = from;
    while (k < code_.size() && !code_[k].is(";")) ++k;
    return k;
  }

  std::string concat(std::size_t b, std::size_t e) const {
    std::string out;
    for (std::size_t k = b; k < e && k < code_.size(); ++k) out.append(code_[k].text);
    return out;
  }

  // Skips a balanced group starting at an opener; fails when unbalanced.
  std::size_t skip_group(std::size_t open) const {
    const std::size_t close = find_matching(code_, open);
    if (close >= code_.size()) fail("unbalanced '" + std::string(code_[open].text) + "'");
    return close + 1;
  }

  // Skips to just past the ';' ending a field or similar, honoring nesting.
  std::size_t skip_statement(std::size_t from) const {
    int depth = 0;
    for (std::size_t k = from; k < code_.size(); ++k) {
      const Token& t = code_[k];
      if (t.kind != TokenKind::kPunct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") {
        ++depth;
      } else if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (depth == 0) return k;  // let the enclosing body see its closer
        --depth;
      } else if (t.text == ";" && depth == 0) {
        return k + 1;
      }
    }
    fail("unterminated declaration");
  }

  bool at_type_keyword() const {
    if (at("class") || at("interface") || at("enum")) return true;
    if (at("@") && at(i_ + 1, "interface")) return true;
    // `record` is contextual: record Name ( or record Name <
    return at("record") && i_ + 2 < code_.size() &&
           code_[i_ + 1].kind == TokenKind::kIdentifier &&
           (code_[i_ + 2].is("(") || code_[i_ + 2].is("<"));
  }

  std::string doc_comment_before(std::size_t code_index) const {
    const std::size_t full = full_index_[code_index];
    if (full == 0) return {};
    const Token& prev = unit_.tokens[full - 1];
    if (prev.kind != TokenKind::kDocComment) return {};
    return clean_doc_comment(prev.text);
  }

  void parse_member(std::size_t owner, const std::string& chain, bool enclosing_public) {
    const std::size_t start = i_;
    std::vector<std::string> annotations;
    std::set<std::string, std::less<>> modifiers;
    while (i_ < code_.size()) {
      if (at("@") && !at(i_ + 1, "interface")) {
        const std::size_t ann = i_;
        ++i_;
        if (i_ < code_.size() && code_[i_].kind == TokenKind::kIdentifier) ++i_;
        while (at(".") && i_ + 1 < code_.size() &&
               code_[i_ + 1].kind == TokenKind::kIdentifier) {
          i_ += 2;
        }
        if (at("(")) i_ = skip_group(i_);
        annotations.push_back(source_text(
            src_, std::span<const Token>(code_).subspan(ann, i_ - ann)));
      } else if (at("non") && at(i_ + 1, "-") && at(i_ + 2, "sealed")) {
        i_ += 3;
      } else if (i_ < code_.size() && is_modifier(code_[i_].text) &&
                 code_[i_].kind == TokenKind::kIdentifier) {
        modifiers.insert(std::string(code_[i_].text));
        ++i_;
      } else {
        break;
      }
    }
    if (i_ >= code_.size()) return;

    const std::string owner_kind = owner == kNoOwner ? "" : unit_.types[owner].kind;
    const bool implicit_public = owner_kind == "interface" || owner_kind == "@interface";
    const bool visible = !modifiers.contains("private") &&
                         (modifiers.contains("public") || modifiers.contains("protected") ||
                          implicit_public);

    if (at_type_keyword()) {
      parse_type_decl(chain, owner == kNoOwner ? modifiers.contains("public") || visible
                                               : enclosing_public && visible);
      return;
    }
    if (owner == kNoOwner) return;  // stray top-level tokens
    if (at("{")) {
      i_ = skip_group(i_);  // initializer block
      return;
    }
    if (at(";")) {
      ++i_;
      return;
    }
    if (at("<")) {
      const std::size_t close = find_matching(code_, i_);
      i_ = close < code_.size() ? close + 1 : i_ + 1;
    }

    const std::size_t header = i_;
    std::size_t j = i_;
    while (j < code_.size()) {
      const Token& t = code_[j];
      if (t.is("<")) {
        const std::size_t close = find_matching(code_, j);
        j = close < code_.size() ? close + 1 : j + 1;
        continue;
      }
      if (t.is("(") || t.is("=") || t.is(";") || t.is(",") || t.is("{") || t.is("}")) break;
      ++j;
    }
    if (j >= code_.size()) fail("unterminated member declaration");

    if (code_[j].is("(") && j > header &&
        code_[j - 1].kind == TokenKind::kIdentifier) {
      parse_method(owner, header, j, annotations, visible, start);
      return;
    }
    if (code_[j].is("=") || code_[j].is(";") || code_[j].is(",")) {
      if (j >= header + 2 && code_[j - 1].kind == TokenKind::kIdentifier) {
        std::span<const Token> type_tokens(code_.data() + header, j - 1 - header);
        const std::string type = render_type(type_tokens);
        unit_.types[owner].fields.push_back(Variable{type, std::string(code_[j - 1].text)});
        // Further declarators: `int a = 0, b;`
        const std::size_t end = skip_statement(j);
        int depth = 0;
        for (std::size_t k = j; k + 1 < end; ++k) {
          const Token& t = code_[k];
          if (t.is("(") || t.is("{") || t.is("[")) ++depth;
          if (t.is(")") || t.is("}") || t.is("]")) --depth;
          if (depth == 0 && t.is(",") && code_[k + 1].kind == TokenKind::kIdentifier) {
            unit_.types[owner].fields.push_back(Variable{type, std::string(code_[k + 1].text)});
          }
        }
        i_ = end;
        return;
      }
      i_ = skip_statement(j);
      return;
    }
    if (code_[j].is("{")) {
      i_ = skip_group(j);  // compact record constructor and the like
      return;
    }
    i_ = j;  // '}' closes the owner body
  }

  void parse_method(std::size_t owner, std::size_t header, std::size_t open,
                    std::vector<std::string> annotations, bool visible,
                    std::size_t member_start) {
    TypeDecl& type = unit_.types[owner];
    MethodDecl m;
    const Token& name_tok = code_[open - 1];
    m.name = std::string(name_tok.text);
    m.line = name_tok.line;
    m.annotations = std::move(annotations);
    m.doc_comment = doc_comment_before(member_start);
    m.is_public = visible;
    std::span<const Token> type_tokens(code_.data() + header, open - 1 - header);
    if (type_tokens.empty()) {
      m.is_constructor = true;
      m.return_type = "void";
    } else {
      m.return_type = render_type(type_tokens);
    }
    const std::size_t close = find_matching(code_, open);
    if (close >= code_.size()) fail("unbalanced parameter list");
    m.params = parse_params(open + 1, close);
    std::size_t k = close + 1;
    while (at(k, "[") && at(k + 1, "]")) {
      m.return_type += "[]";
      k += 2;
    }
    if (at(k, "throws")) {
      ++k;
      std::size_t type_start = k;
      while (k < code_.size() && !code_[k].is("{") && !code_[k].is(";")) {
        if (code_[k].is(",")) {
          m.thrown_types.push_back(render_type(
              std::span<const Token>(code_).subspan(type_start, k - type_start)));
          type_start = k + 1;
        }
        ++k;
      }
      if (k > type_start) {
        m.thrown_types.push_back(render_type(
            std::span<const Token>(code_).subspan(type_start, k - type_start)));
      }
    }
    if (at(k, "default")) {
      while (k < code_.size() && !code_[k].is(";")) ++k;
    }
    if (at(k, "{")) {
      const std::size_t end = find_matching(code_, k);
      if (end >= code_.size()) fail("unbalanced braces in body of " + m.name);
      m.has_body = true;
      m.body_begin = k;
      m.body_end = end;
      i_ = end + 1;
    } else if (at(k, ";")) {
      i_ = k + 1;
    } else {
      i_ = skip_statement(k);
      return;
    }
    type.methods.push_back(std::move(m));
  }

  std::vector<Variable> parse_params(std::size_t begin, std::size_t end) const {
    std::vector<Variable> out;
    std::size_t piece = begin;
    int depth = 0;
    for (std::size_t k = begin; k <= end; ++k) {
      if (k < end) {
        const Token& t = code_[k];
        if (t.is("<") || t.is("(") || t.is("[")) ++depth;
        if (t.is(">") || t.is(")") || t.is("]")) --depth;
        if (!(t.is(",") && depth == 0)) continue;
      }
      if (k > piece) {
        std::span<const Token> p(code_.data() + piece, k - piece);
        // Trailing C-style dims: `int a[]`.
        std::string dims;
        while (p.size() >= 2 && p.back().is("]") && p[p.size() - 2].is("[")) {
          dims += "[]";
          p = p.first(p.size() - 2);
        }
        if (!p.empty() && p.back().is("this")) {
          // receiver parameter, not part of the signature
        } else if (p.size() >= 2 && p.back().kind == TokenKind::kIdentifier) {
          out.push_back(Variable{render_type(p.first(p.size() - 1)) + dims,
                                 std::string(p.back().text)});
        } else {
          out.push_back(Variable{render_type(p) + dims, ""});
        }
      }
      piece = k + 1;
    }
    return out;
  }

  void parse_type_decl(const std::string& chain, bool is_public) {
    std::string kind;
    if (at("@")) {
      kind = "@interface";
      i_ += 2;
    } else {
      kind = std::string(code_[i_].text);
      ++i_;
    }
    if (i_ >= code_.size() || code_[i_].kind != TokenKind::kIdentifier) {
      fail("expected type name after '" + kind + "'");
    }
    TypeDecl type;
    type.kind = kind;
    type.simple_name = std::string(code_[i_].text);
    const std::string prefix =
        chain.empty() ? (unit_.package_name.empty() ? "" : unit_.package_name + ".")
                      : chain + ".";
    type.qualified_name = prefix + type.simple_name;
    type.is_public = is_public;
    ++i_;
    while (i_ < code_.size() && !at("{")) {
      if (at("<") || at("(")) {
        const std::size_t close = find_matching(code_, i_);
        if (close >= code_.size()) fail("unbalanced type header");
        i_ = close + 1;
        continue;
      }
      if (at("extends") && type.extends.empty()) {
        std::size_t k = i_ + 1;
        const std::size_t first = k;
        while (k < code_.size() && !code_[k].is("{") && !code_[k].is(",") &&
               !code_[k].is("implements") && !code_[k].is("permits")) {
          if (code_[k].is("<")) {
            const std::size_t close = find_matching(code_, k);
            k = close < code_.size() ? close + 1 : k + 1;
            continue;
          }
          ++k;
        }
        type.extends = render_type(std::span<const Token>(code_).subspan(first, k - first));
        i_ = k;
        continue;
      }
      ++i_;
    }
    if (i_ >= code_.size()) fail("missing body for type " + type.simple_name);
    const std::size_t index = unit_.types.size();
    const std::string qualified = type.qualified_name;
    unit_.types.push_back(std::move(type));
    parse_class_body(index, qualified, is_public);
  }

  void parse_class_body(std::size_t owner, const std::string& chain, bool is_public) {
    ++i_;  // '{'
    if (unit_.types[owner].kind == "enum") {
      int depth = 0;
      while (true) {
        if (i_ >= code_.size()) fail("unbalanced braces in enum " + chain);
        const Token& t = code_[i_];
        if (t.is("(") || t.is("{") || t.is("[")) ++depth;
        if (t.is(")") || t.is("]")) --depth;
        if (t.is("}")) {
          if (depth == 0) {
            ++i_;
            return;
          }
          --depth;
        }
        if (t.is(";") && depth == 0) {
          ++i_;
          break;
        }
        ++i_;
      }
    }
    while (true) {
      if (i_ >= code_.size()) fail("unbalanced braces in " + chain);
      if (at("}")) {
        ++i_;
        return;
      }
      const std::size_t before = i_;
      parse_member(owner, chain, is_public);
      if (i_ == before) ++i_;
    }
  }

  std::string_view src_;
  CompilationUnit unit_;
  std::vector<Token> code_;
  std::vector<std::size_t> full_index_;
  std::size_t i_ = 0;
};

}  // namespace

CompilationUnit parse_compilation_unit(std::string_view source) {
  return UnitParser(source).run();
}

std::string render_type(std::span<const Token> tokens) {
  std::string out;
  std::size_t k = 0;
  while (k < tokens.size()) {
    const Token& t = tokens[k];
    if (t.is_comment() || t.is("final")) {
      ++k;
    } else if (t.is("@")) {
      ++k;
      if (k < tokens.size() && tokens[k].kind == TokenKind::kIdentifier) ++k;
      while (k + 1 < tokens.size() && tokens[k].is(".") &&
             tokens[k + 1].kind == TokenKind::kIdentifier) {
        k += 2;
      }
      if (k < tokens.size() && tokens[k].is("(")) {
        const std::size_t close = find_matching(tokens, k);
        k = close < tokens.size() ? close + 1 : tokens.size();
      }
    } else if (t.is("<")) {
      int depth = 0;
      while (k < tokens.size()) {
        if (tokens[k].is("<")) ++depth;
        if (tokens[k].is(">") && --depth == 0) break;
        ++k;
      }
      ++k;
    } else if (t.is("...")) {
      out += "[]";
      ++k;
    } else {
      out.append(t.text);
      ++k;
    }
  }
  return out;
}

std::string clean_doc_comment(std::string_view raw) {
  std::string_view body = raw;
  if (body.starts_with("/**")) body.remove_prefix(3);
  else if (body.starts_with("/*")) body.remove_prefix(2);
  if (body.ends_with("*/")) body.remove_suffix(2);
  std::vector<std::string> lines;
  std::istringstream in{std::string(body)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.starts_with("*")) t = trim(std::string_view(t).substr(1));
    lines.push_back(std::move(t));
  }
  while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (k) out.push_back('\n');
    out += lines[k];
  }
  return out;
}

}  // namespace apicompat::java
