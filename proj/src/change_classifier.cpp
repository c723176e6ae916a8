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

#include "apicompat/change_classifier.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "apicompat/error.h"
#include "apicompat/java_lexer.h"
#include "apicompat/statements.h"

namespace apicompat::changes {

namespace {

using java::CallExpr;
using java::Stmt;
using java::StmtKind;
using java::Token;
using java::TokenRange;

struct CallKey {
  std::string receiver;
  std::string name;
  int arg_count = 0;
  bool is_constructor = false;

  auto operator<=>(const CallKey&) const = default;
};

// A comparison key (token-joined, formatting-independent) plus the text
// shown as evidence.
struct Item {
  std::string key;
  std::string shown;
};

struct Leaf {
  Item item;
  std::vector<CallKey> calls;
};

struct Facets {
  std::vector<Item> returns;
  std::vector<Item> exceptions;
  std::vector<Item> controls;
  std::vector<Leaf> leaves;
  std::vector<std::pair<CallKey, std::string>> calls;
};

class FacetCollector {
 public:
  FacetCollector(std::string_view body, const java::ParsedBody& parsed,
                 const std::vector<std::string>& thrown)
      : body_(body), t_(parsed.tokens) {
    for (const CallExpr& c : java::find_calls(t_, {0, t_.size()})) {
      CallKey key{c.receiver, c.name, c.arg_count, c.is_constructor};
      std::string shown;
      if (c.is_constructor) {
        shown = "new ";
      } else if (c.receiver != "this") {
        shown = c.receiver + ".";
      }
      shown += java::source_text(body_, std::span<const Token>(t_).subspan(
                                            c.name_token, c.close_paren + 1 - c.name_token));
      call_at_.emplace(c.name_token, key);
      f_.calls.emplace_back(std::move(key), std::move(shown));
    }
    for (const std::string& t : thrown) f_.exceptions.push_back({"throws " + t, "throws " + t});
    walk(parsed.root, false);
  }

  Facets take() { return std::move(f_); }

 private:
  Item item(TokenRange r) const {
    const auto span = r.of(t_);
    return {java::join_tokens(span), java::source_text(body_, span)};
  }

  void leaf(TokenRange r) {
    Leaf l{item(r), {}};
    for (auto it = call_at_.lower_bound(r.begin); it != call_at_.end() && it->first < r.end;
         ++it) {
      l.calls.push_back(it->second);
    }
    f_.leaves.push_back(std::move(l));
  }

  void walk(const Stmt& s, bool under_control) {
    switch (s.kind) {
      case StmtKind::kIf:
      case StmtKind::kLoop:
      case StmtKind::kSwitch:
        f_.controls.push_back(item(s.tokens));
        under_control = true;
        break;
      case StmtKind::kTry:
      case StmtKind::kCatch:
      case StmtKind::kFinally:
        f_.exceptions.push_back(item(s.header));
        break;
      case StmtKind::kReturn:
        f_.returns.push_back(item(s.tokens));
        return;
      case StmtKind::kThrow:
        f_.exceptions.push_back(item(s.tokens));
        return;
      case StmtKind::kSynchronized:
        if (!under_control) leaf(s.header);
        break;
      case StmtKind::kSimple:
      case StmtKind::kLocalClass:
      case StmtKind::kSwitchLabel:
        if (!under_control) leaf(s.tokens);
        return;
      case StmtKind::kBlock:
      case StmtKind::kLabeled:
      case StmtKind::kEmpty:
        break;
    }
    for (const Stmt& c : s.children) walk(c, under_control);
  }

  std::string_view body_;
  std::span<const Token> t_;
  std::multimap<std::size_t, CallKey> call_at_;
  Facets f_;
};

// Multiset difference by key, both directions. Shown texts keep input order.
std::pair<std::vector<Item>, std::vector<Item>> diff_items(const std::vector<Item>& a,
                                                           const std::vector<Item>& b) {
  std::map<std::string, int> count;
  for (const Item& x : a) ++count[x.key];
  for (const Item& x : b) --count[x.key];
  std::vector<Item> removed;
  std::vector<Item> added;
  std::map<std::string, int> left = count;
  for (const Item& x : a) {
    if (left[x.key] > 0) {
      removed.push_back(x);
      --left[x.key];
    }
  }
  for (const Item& x : b) {
    if (left[x.key] < 0) {
      added.push_back(x);
      ++left[x.key];
    }
  }
  return {removed, added};
}

std::string join_shown(const std::vector<Item>& items) {
  std::string out;
  for (const Item& x : items) {
    if (!out.empty()) out += '\n';
    out += x.shown;
  }
  return out;
}

bool dependent_pair(const CallKey& r, const CallKey& a) {
  if (r.name == a.name && r.arg_count != a.arg_count) return true;
  return !r.is_constructor && !a.is_constructor && r.receiver != "?" &&
         r.receiver == a.receiver && r.name != a.name;
}

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.emplace_back(t.text);
  return out;
}

}  // namespace

std::string normalize_body(std::string_view body) { return java::normalize_code_text(body); }

ChangeReport classify_change(const ApiRecord& old_record, const ApiRecord& new_record) {
  if (!old_record.signature.same_identity(new_record.signature)) {
    throw Error(ErrorCode::kPrecondition,
                "classify_change: identity mismatch " + old_record.signature.identity_key() +
                    " vs " + new_record.signature.identity_key());
  }
  ChangeReport report;
  report.signature = new_record.signature;
  report.boundary = {old_record.level, new_record.level};

  const java::ParsedBody old_body = java::parse_body(old_record.body);
  const java::ParsedBody new_body = java::parse_body(new_record.body);
  const bool same_tokens = token_texts(old_body.tokens) == token_texts(new_body.tokens);
  const bool same_return_type =
      old_record.signature.return_type == new_record.signature.return_type;
  std::vector<std::string> old_thrown = old_record.thrown_types;
  std::vector<std::string> new_thrown = new_record.thrown_types;
  std::sort(old_thrown.begin(), old_thrown.end());
  std::sort(new_thrown.begin(), new_thrown.end());

  if (same_tokens && same_return_type && old_thrown == new_thrown) {
    report.change_types.insert(ChangeType::kNoChange);
    return report;
  }

  auto flag = [&](ChangeType t, std::string old_snippet, std::string new_snippet) {
    report.change_types.insert(t);
    report.evidence.push_back({t, std::move(old_snippet), std::move(new_snippet)});
  };

  if (!same_return_type) {
    flag(ChangeType::kReturnStatementChanged, "return type " + old_record.signature.return_type,
         "return type " + new_record.signature.return_type);
  }

  Facets fo = FacetCollector(old_record.body, old_body, old_thrown).take();
  Facets fn = FacetCollector(new_record.body, new_body, new_thrown).take();

  const std::pair<ChangeType, std::pair<std::vector<Item>*, std::vector<Item>*>> facets[] = {
      {ChangeType::kReturnStatementChanged, {&fo.returns, &fn.returns}},
      {ChangeType::kExceptionHandlingStatementChanged, {&fo.exceptions, &fn.exceptions}},
      {ChangeType::kControlDependencyChanged, {&fo.controls, &fn.controls}},
  };
  for (const auto& [type, lists] : facets) {
    auto [removed, added] = diff_items(*lists.first, *lists.second);
    if (!removed.empty() || !added.empty()) flag(type, join_shown(removed), join_shown(added));
  }

  // Dependent API: a removed call paired with an added one.
  std::vector<Item> old_calls;
  std::vector<Item> new_calls;
  std::map<std::string, CallKey> key_of;
  auto call_item = [&](const std::pair<CallKey, std::string>& c) {
    std::string k = c.first.receiver + '\x1f' + c.first.name + '\x1f' +
                    std::to_string(c.first.arg_count) + (c.first.is_constructor ? "\x1fnew" : "");
    key_of.emplace(k, c.first);
    return Item{k, c.second};
  };
  for (const auto& c : fo.calls) old_calls.push_back(call_item(c));
  for (const auto& c : fn.calls) new_calls.push_back(call_item(c));
  auto [removed_calls, added_calls] = diff_items(old_calls, new_calls);
  std::set<CallKey> flagged_old;
  std::set<CallKey> flagged_new;
  std::vector<Item> dep_old;
  std::vector<Item> dep_new;
  for (const Item& r : removed_calls) {
    for (const Item& a : added_calls) {
      if (dependent_pair(key_of.at(r.key), key_of.at(a.key))) {
        flagged_old.insert(key_of.at(r.key));
        flagged_new.insert(key_of.at(a.key));
      }
    }
  }
  for (const Item& r : removed_calls) {
    if (flagged_old.contains(key_of.at(r.key))) dep_old.push_back(r);
  }
  for (const Item& a : added_calls) {
    if (flagged_new.contains(key_of.at(a.key))) dep_new.push_back(a);
  }
  if (!dep_old.empty()) {
    flag(ChangeType::kDependentApiChanged, join_shown(dep_old), join_shown(dep_new));
  }

  // Remaining statements not already explained by a dependent-call edit.
  auto plain_leaves = [](const std::vector<Leaf>& leaves, const std::set<CallKey>& flagged) {
    std::vector<Item> out;
    for (const Leaf& l : leaves) {
      const bool explained = std::any_of(l.calls.begin(), l.calls.end(),
                                         [&](const CallKey& k) { return flagged.contains(k); });
      if (!explained) out.push_back(l.item);
    }
    return out;
  };
  auto [removed_leaves, added_leaves] =
      diff_items(plain_leaves(fo.leaves, flagged_old), plain_leaves(fn.leaves, flagged_new));
  if (!removed_leaves.empty() || !added_leaves.empty()) {
    flag(ChangeType::kOtherStatementChanged, join_shown(removed_leaves), join_shown(added_leaves));
  }

  if (report.change_types.empty()) {
    // Same statements, different arrangement.
    flag(ChangeType::kOtherStatementChanged, normalize_body(old_record.body),
         normalize_body(new_record.body));
  }
  return report;
}

void apply_corpus_dependencies(ChangeReport& report, const ApiRecord& new_record,
                               const std::vector<ApiSignature>& changed_at_boundary) {
  if (report.change_types.contains(ChangeType::kNoChange)) return;
  const java::ParsedBody body = java::parse_body(new_record.body);
  std::vector<std::string> hits;
  for (const CallExpr& c : java::find_calls(body.tokens, {0, body.tokens.size()})) {
    for (const ApiSignature& s : changed_at_boundary) {
      if (s.method_name == c.name && static_cast<int>(s.param_types.size()) == c.arg_count &&
          !s.same_identity(new_record.signature)) {
        hits.push_back(render_signature(s));
      }
    }
  }
  if (hits.empty()) return;
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  std::string shown;
  for (const auto& h : hits) {
    if (!shown.empty()) shown += '\n';
    shown += h;
  }
  report.change_types.insert(ChangeType::kDependentApiChanged);
  report.evidence.push_back({ChangeType::kDependentApiChanged, "", "callee changed: " + shown});
}

// ---------------------------------------------------------------------------
// Node-tree rendering.

namespace {

struct Node {
  std::string kind;
  std::string payload;
  std::vector<Node> children;
};

constexpr std::string_view kAssignOps[] = {"=",  "+=", "-=",  "*=",  "/=",   "%=",
                                           "&=", "|=", "^=", "<<=", ">>=", ">>>="};

class AstBuilder {
 public:
  AstBuilder(std::string_view body, std::span<const Token> tokens) : body_(body), t_(tokens) {}

  std::vector<Node> body_nodes(const Stmt& s) {
    if (s.kind != StmtKind::kBlock) return nodes(s);
    std::vector<Node> out;
    for (const Stmt& c : s.children) {
      auto part = nodes(c);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
  }

 private:
  std::string text(std::size_t begin, std::size_t end) const {
    if (begin >= end) return {};
    return java::source_text(body_, t_.subspan(begin, end - begin));
  }
  std::string text(TokenRange r) const { return text(r.begin, r.end); }

  // Statement text without its terminating ';'.
  TokenRange bare(TokenRange r) const {
    if (!r.empty() && t_[r.end - 1].is(";")) --r.end;
    return r;
  }

  static Node leaf(std::string kind, std::string payload) {
    return Node{std::move(kind), std::move(payload), {}};
  }

  std::vector<Node> nodes(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::kEmpty:
        return {};
      case StmtKind::kBlock:
        return {Node{"Statement", "{", body_nodes(s)}};
      case StmtKind::kIf: {
        std::vector<Node> out;
        out.push_back(Node{"Statement", text(s.header),
                           s.children.empty() ? std::vector<Node>{} : body_nodes(s.children[0])});
        if (s.has_else && s.children.size() > 1) {
          out.push_back(Node{"Statement", "else", body_nodes(s.children[1])});
        }
        return out;
      }
      case StmtKind::kLoop: {
        std::string head = text(s.header);
        if (t_[s.tokens.begin].is("do")) head = head.empty() ? "do" : "do " + head;
        return {Node{"Statement", head,
                     s.children.empty() ? std::vector<Node>{} : body_nodes(s.children[0])}};
      }
      case StmtKind::kSwitch: {
        std::vector<Node> kids;
        for (const Stmt& c : s.children) {
          auto part = nodes(c);
          std::move(part.begin(), part.end(), std::back_inserter(kids));
        }
        return {Node{"Statement", text(s.header), std::move(kids)}};
      }
      case StmtKind::kTry: {
        std::vector<Node> out;
        std::size_t k = 0;
        std::vector<Node> kids;
        if (!s.children.empty() && s.children[0].kind == StmtKind::kBlock) {
          kids = body_nodes(s.children[0]);
          k = 1;
        }
        out.push_back(Node{"Statement", text(s.header), std::move(kids)});
        for (; k < s.children.size(); ++k) {
          const Stmt& c = s.children[k];
          out.push_back(Node{"Statement", text(c.header),
                             c.children.empty() ? std::vector<Node>{} : body_nodes(c.children[0])});
        }
        return out;
      }
      case StmtKind::kCatch:
      case StmtKind::kFinally:
      case StmtKind::kSynchronized:
      case StmtKind::kLabeled:
        return {Node{"Statement", text(s.header),
                     s.children.empty() ? std::vector<Node>{} : body_nodes(s.children[0])}};
      case StmtKind::kReturn:
      case StmtKind::kThrow:
      case StmtKind::kSwitchLabel:
      case StmtKind::kLocalClass:
        return {leaf("Statement", text(bare(s.tokens)))};
      case StmtKind::kSimple:
        return {simple(bare(s.tokens))};
    }
    return {};
  }

  Node simple(TokenRange r) const {
    int depth = 0;
    for (std::size_t k = r.begin; k < r.end; ++k) {
      const Token& x = t_[k];
      if (x.kind != java::TokenKind::kPunct) continue;
      if (x.is("(") || x.is("[") || x.is("{")) ++depth;
      if (x.is(")") || x.is("]") || x.is("}")) --depth;
      if (depth != 0 || k == r.begin) continue;
      for (std::string_view op : kAssignOps) {
        if (x.text == op) {
          return Node{"AssignmentExpression", std::string(op),
                      {leaf("VariableReference", text(r.begin, k)),
                       leaf("Expression", text(k + 1, r.end))}};
        }
      }
    }
    if (r.empty()) return leaf("Expression", "");
    const Token& first = t_[r.begin];
    const Token& last = t_[r.end - 1];
    const bool has_call = std::any_of(t_.begin() + r.begin, t_.begin() + r.end,
                                      [](const Token& x) { return x.is("(") || x.is("."); });
    if (r.end - r.begin >= 2 && last.kind == java::TokenKind::kIdentifier &&
        !java::is_java_keyword(last.text) && !has_call) {
      return leaf("VariableReference", text(r));
    }
    if (first.kind == java::TokenKind::kIdentifier && java::is_java_keyword(first.text) &&
        !first.is("new") && !first.is("this") && !first.is("super")) {
      return leaf("Statement", text(r));
    }
    return leaf("Expression", text(r));
  }

  std::string_view body_;
  std::span<const Token> t_;
};

std::string inline_form(const Node& n) {
  std::string out = n.kind + "(" + n.payload + ", [";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ", ";
    out += inline_form(n.children[i]);
  }
  out += "])";
  return out;
}

void expand(const Node& n, int depth, std::string& out) {
  out += '\n';
  out.append(static_cast<std::size_t>(2 * depth), ' ');
  out += inline_form(n);
  for (const Node& c : n.children) expand(c, depth + 1, out);
}

}  // namespace

std::string to_ast_text(std::string_view body) {
  Node root{"MethodDeclaration", "method_body", {}};
  root.children.push_back(Node{"Statement", "{", {}});
  try {
    const java::ParsedBody parsed = java::parse_body(body);
    AstBuilder builder(body, parsed.tokens);
    auto kids = builder.body_nodes(parsed.root);
    std::move(kids.begin(), kids.end(), std::back_inserter(root.children));
  } catch (const Error&) {
    root.children.push_back(Node{"Expression", normalize_body(body), {}});
  }
  root.children.push_back(Node{"Statement", "}", {}});

  std::string out = inline_form(root);
  for (const Node& c : root.children) expand(c, 1, out);
  return out;
}

}  // namespace apicompat::changes
