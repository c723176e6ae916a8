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

#include "apicompat/app_checker.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "apicompat/error.h"
#include "apicompat/java_source.h"
#include "apicompat/json_io.h"
#include "apicompat/statements.h"
#include "apicompat/util.h"

namespace apicompat::appcheck {

namespace {

using java::CallExpr;
using java::Stmt;
using java::StmtKind;
using java::Token;
using java::TokenKind;
using java::TokenRange;

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// android.os.Build.VERSION_CODES
constexpr std::pair<std::string_view, int> kVersionCodes[] = {
    {"BASE", 1},
    {"BASE_1_1", 2},
    {"CUPCAKE", 3},
    {"DONUT", 4},
    {"ECLAIR", 5},
    {"ECLAIR_0_1", 6},
    {"ECLAIR_MR1", 7},
    {"FROYO", 8},
    {"GINGERBREAD", 9},
    {"GINGERBREAD_MR1", 10},
    {"HONEYCOMB", 11},
    {"HONEYCOMB_MR1", 12},
    {"HONEYCOMB_MR2", 13},
    {"ICE_CREAM_SANDWICH", 14},
    {"ICE_CREAM_SANDWICH_MR1", 15},
    {"JELLY_BEAN", 16},
    {"JELLY_BEAN_MR1", 17},
    {"JELLY_BEAN_MR2", 18},
    {"KITKAT", 19},
    {"KITKAT_WATCH", 20},
    {"LOLLIPOP", 21},
    {"LOLLIPOP_MR1", 22},
    {"M", 23},
    {"N", 24},
    {"N_MR1", 25},
    {"O", 26},
    {"O_MR1", 27},
    {"P", 28},
    {"Q", 29},
    {"R", 30},
    {"S", 31},
    {"S_V2", 32},
    {"TIRAMISU", 33},
    {"UPSIDE_DOWN_CAKE", 34},
};

// Qualified name `a.b.c` spanning the whole range.
bool is_dotted_name(std::span<const Token> t) {
  if (t.empty() || t.size() % 2 == 0) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i % 2 == 0 ? t[i].kind != TokenKind::kIdentifier : !t[i].is(".")) return false;
  }
  return true;
}

bool is_sdk_int(std::span<const Token> t) {
  return is_dotted_name(t) && t.back().text == "SDK_INT";
}

std::optional<int> level_literal(std::span<const Token> t) {
  if (t.size() == 1 && t[0].kind == TokenKind::kNumber) return to_int(t[0].text);
  if (t.size() >= 3 && is_dotted_name(t) && t[t.size() - 3].text == "VERSION_CODES") {
    for (const auto& [name, level] : kVersionCodes) {
      if (t.back().text == name) return level;
    }
  }
  return std::nullopt;
}

// Complement within the universe; two-sided complements widen to the hull.
Interval complement(const Interval& s, const Interval& u) {
  if (s.empty()) return u;
  const Interval left{u.lo, std::min(u.hi, s.lo - 1)};
  const Interval right{std::max(u.lo, s.hi + 1), u.hi};
  if (left.empty()) return right;
  if (right.empty()) return left;
  return u;
}

class ConditionEval {
 public:
  ConditionEval(std::span<const Token> t, const Interval& universe) : t_(t), u_(universe) {}

  Interval eval(std::size_t b, std::size_t e, bool pol) const {
    while (e > b + 1 && t_[b].is("(") && java::find_matching(t_, b) == e - 1) {
      ++b;
      --e;
    }
    if (b >= e) return u_;
    for (std::string_view op : {std::string_view("||"), std::string_view("&&")}) {
      const auto parts = split(b, e, op);
      if (parts.size() < 2) continue;
      // De Morgan: || under positive polarity and && under negative unite.
      const bool unite = (op == "||") == pol;
      Interval acc = unite ? Interval{1, 0} : u_;
      for (const auto& [pb, pe] : parts) {
        const Interval part = eval(pb, pe, pol);
        acc = unite ? hull(acc, part) : intersect(acc, part);
      }
      return acc;
    }
    if (t_[b].is("!")) return eval(b + 1, e, !pol);
    return atom(b, e, pol);
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> split(std::size_t b, std::size_t e,
                                                         std::string_view op) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int depth = 0;
    std::size_t start = b;
    for (std::size_t k = b; k < e; ++k) {
      if (t_[k].is("(") || t_[k].is("[") || t_[k].is("{")) ++depth;
      if (t_[k].is(")") || t_[k].is("]") || t_[k].is("}")) --depth;
      if (depth == 0 && t_[k].is(op)) {
        out.emplace_back(start, k);
        start = k + 1;
      }
    }
    out.emplace_back(start, e);
    return out;
  }

  Interval atom(std::size_t b, std::size_t e, bool pol) const {
    static constexpr std::string_view kOps[] = {">=", "<=", "==", "!=", ">", "<"};
    std::size_t at = e;
    int depth = 0;
    for (std::size_t k = b; k < e; ++k) {
      if (t_[k].is("(") || t_[k].is("[")) ++depth;
      if (t_[k].is(")") || t_[k].is("]")) --depth;
      if (depth != 0) continue;
      for (std::string_view op : kOps) {
        if (t_[k].is(op)) {
          if (at != e) return u_;  // more than one comparison
          at = k;
        }
      }
    }
    if (at == e) return u_;
    std::string op(t_[at].text);
    const auto lhs = t_.subspan(b, at - b);
    const auto rhs = t_.subspan(at + 1, e - at - 1);
    std::optional<int> n;
    if (is_sdk_int(lhs)) {
      n = level_literal(rhs);
    } else if (is_sdk_int(rhs)) {
      n = level_literal(lhs);
      // N op SDK_INT  ==  SDK_INT op' N
      if (op == ">") op = "<";
      else if (op == "<") op = ">";
      else if (op == ">=") op = "<=";
      else if (op == "<=") op = ">=";
    }
    if (!n) return u_;
    Interval s;
    if (op == ">=") s = {*n, u_.hi};
    else if (op == ">") s = {*n + 1, u_.hi};
    else if (op == "<=") s = {u_.lo, *n};
    else if (op == "<") s = {u_.lo, *n - 1};
    else if (op == "==") s = {*n, *n};
    else s = complement(Interval{*n, *n}, u_);  // !=
    s = intersect(s, u_);
    if (pol) return s;
    if (op == "!=") return intersect(Interval{*n, *n}, u_);
    return complement(s, u_);
  }

  std::span<const Token> t_;
  Interval u_;
};

// True when control never falls through to the next statement.
bool exits(const Stmt& s, std::span<const Token> t) {
  switch (s.kind) {
    case StmtKind::kReturn:
    case StmtKind::kThrow:
      return true;
    case StmtKind::kSimple:
      return !s.tokens.empty() && (t[s.tokens.begin].is("break") ||
                                   t[s.tokens.begin].is("continue"));
    case StmtKind::kBlock:
      for (auto it = s.children.rbegin(); it != s.children.rend(); ++it) {
        if (it->kind == StmtKind::kEmpty) continue;
        return exits(*it, t);
      }
      return false;
    case StmtKind::kIf:
      return s.has_else && s.children.size() == 2 && exits(s.children[0], t) &&
             exits(s.children[1], t);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Callee resolution.

struct KbIndex {
  // (class, name, arity) and (name, arity) lookups.
  std::map<std::tuple<std::string, std::string, int>, std::vector<kb::IncompatibilityEntry>> exact;
  std::map<std::pair<std::string, int>, std::vector<kb::IncompatibilityEntry>> loose;
  std::set<std::string> classes;
};

KbIndex index_kb(const kb::KnowledgeBase& kb) {
  KbIndex idx;
  for (const auto& e : kb.entries()) {
    const int arity = static_cast<int>(e.signature.param_types.size());
    idx.exact[{e.signature.class_fqn, e.signature.method_name, arity}].push_back(e);
    idx.loose[{e.signature.method_name, arity}].push_back(e);
    idx.classes.insert(e.signature.class_fqn);
  }
  return idx;
}

std::string strip_type(std::string type) {
  if (const auto lt = type.find('<'); lt != std::string::npos) type.erase(lt);
  while (type.size() >= 2 && type.ends_with("[]")) type.resize(type.size() - 2);
  return type;
}

class FileResolver {
 public:
  FileResolver(const java::CompilationUnit& cu, const KbIndex& kb) : cu_(cu), kb_(kb) {
    for (const auto& t : cu.types) local_types_[t.simple_name] = t.qualified_name;
  }

  // Candidate fully qualified names for a type as written.
  std::vector<std::string> candidates(const std::string& written) const {
    const std::string type = strip_type(written);
    if (type.empty()) return {};
    const auto dot = type.find('.');
    const std::string head = type.substr(0, dot);
    const std::string tail = dot == std::string::npos ? "" : type.substr(dot);
    std::vector<std::string> out;
    if (const auto it = local_types_.find(head); it != local_types_.end()) {
      out.push_back(it->second + tail);
      return out;
    }
    for (const auto& imp : cu_.imports) {
      if (imp.ends_with("." + head)) {
        out.push_back(imp + tail);
        return out;
      }
    }
    if (dot != std::string::npos && std::islower(static_cast<unsigned char>(type[0]))) {
      out.push_back(type);  // already qualified
      return out;
    }
    for (const auto& imp : cu_.imports) {
      if (imp.ends_with(".*")) out.push_back(imp.substr(0, imp.size() - 1) + type);
    }
    if (!cu_.package_name.empty()) out.push_back(cu_.package_name + "." + type);
    out.push_back("java.lang." + type);
    out.push_back(type);
    return out;
  }

  // The framework class a type resolves to, if any candidate is known.
  std::optional<std::string> kb_class(const std::string& written) const {
    for (const auto& c : candidates(written)) {
      if (kb_.classes.contains(c)) return c;
    }
    return std::nullopt;
  }

  const java::CompilationUnit& unit() const { return cu_; }

 private:
  const java::CompilationUnit& cu_;
  const KbIndex& kb_;
  std::map<std::string, std::string> local_types_;
};

// Local variable declarations `Type name` in a body, by name. The first
// declaration of a name wins.
std::map<std::string, std::string> local_variables(std::span<const Token> t, std::size_t begin,
                                                   std::size_t end) {
  static constexpr std::string_view kPrimitives[] = {"int",   "long",  "short", "byte", "char",
                                                     "float", "double", "boolean", "var"};
  std::map<std::string, std::string> out;
  for (std::size_t k = begin + 1; k + 1 < end; ++k) {
    const Token& name = t[k];
    if (name.kind != TokenKind::kIdentifier || java::is_java_keyword(name.text)) continue;
    const Token& next = t[k + 1];
    if (!(next.is("=") || next.is(";") || next.is(",") || next.is(":") || next.is(")"))) continue;
    std::size_t j = k - 1;
    while (j > begin && t[j].is("]") && t[j - 1].is("[")) j = j >= begin + 2 ? j - 2 : begin;
    if (t[j].is(">")) {
      int depth = 0;
      while (j > begin) {
        if (t[j].is(">")) ++depth;
        if (t[j].is(">>")) depth += 2;
        if (t[j].is("<") && --depth == 0) break;
        --j;
      }
      if (j == begin) continue;
      --j;
    }
    if (t[j].kind != TokenKind::kIdentifier) continue;
    const bool primitive =
        std::find(std::begin(kPrimitives), std::end(kPrimitives), t[j].text) != std::end(kPrimitives);
    if (java::is_java_keyword(t[j].text) && !primitive) continue;
    std::size_t s = j;
    while (s >= begin + 2 && t[s - 1].is(".") && t[s - 2].kind == TokenKind::kIdentifier) s -= 2;
    const Token& before = t[s - 1];
    if (!(before.is("{") || before.is("}") || before.is(";") || before.is("(") ||
          before.is(",") || before.is("final") || before.is(")"))) {
      continue;
    }
    out.emplace(std::string(name.text),
                java::render_type(t.subspan(s, k - s)));
  }
  return out;
}

struct MethodScope {
  const java::TypeDecl* type;
  const java::MethodDecl* method;
  std::map<std::string, std::string> variables;  // name -> type as written
};

struct Resolution {
  std::vector<kb::IncompatibilityEntry> entries;
  std::string class_fqn;
  bool high = false;
};

bool declares(const java::TypeDecl& type, const std::string& name, int arity) {
  return std::any_of(type.methods.begin(), type.methods.end(), [&](const auto& m) {
    return m.name == name && static_cast<int>(m.params.size()) == arity;
  });
}

Resolution resolve_call(const CallExpr& c, const MethodScope& scope, const FileResolver& files,
                        const KbIndex& kb) {
  Resolution r;
  auto exact = [&](const std::string& cls, const std::string& name) {
    r.class_fqn = cls;
    r.high = true;
    if (auto it = kb.exact.find({cls, name, c.arg_count}); it != kb.exact.end()) {
      r.entries = it->second;
    }
  };
  auto loose = [&] {
    r.high = false;
    if (auto it = kb.loose.find({c.name, c.arg_count}); it != kb.loose.end()) {
      r.entries = it->second;
    }
  };

  if (c.is_constructor) {
    const std::string written = c.receiver.empty() ? c.name : c.receiver + "." + c.name;
    if (auto cls = files.kb_class(written)) exact(*cls, c.name);
    else r.high = true;  // an application or unaffected type
    return r;
  }
  if (c.receiver == "this" || c.receiver == "super") {
    if (c.receiver == "this" && declares(*scope.type, c.name, c.arg_count)) {
      r.high = true;
      return r;
    }
    if (scope.type->extends.empty()) {
      r.high = true;  // only Object's methods are inherited
      return r;
    }
    if (auto cls = files.kb_class(scope.type->extends)) {
      exact(*cls, c.name);
      if (r.entries.empty()) loose();
      else return r;
    } else {
      loose();
    }
    return r;
  }
  const std::vector<Token> recv = java::lex_code(c.receiver);
  if (is_dotted_name(recv)) {
    const std::string head(recv[0].text);
    std::string type;
    if (auto it = scope.variables.find(head); it != scope.variables.end()) {
      type = it->second;
    } else if (recv.size() == 1 && head == "this") {
      type = scope.type->qualified_name;
    }
    if (!type.empty() && recv.size() == 1) {
      if (auto cls = files.kb_class(type)) exact(*cls, c.name);
      else r.high = true;
      return r;
    }
    if (type.empty()) {
      // Static call through a class name, simple or qualified.
      if (auto cls = files.kb_class(c.receiver)) {
        exact(*cls, c.name);
        return r;
      }
      const bool looks_like_type = std::isupper(static_cast<unsigned char>(head[0])) ||
                                   (recv.size() > 1 && std::islower(static_cast<unsigned char>(head[0])) &&
                                    std::isupper(static_cast<unsigned char>(recv.back().text[0])));
      if (looks_like_type && recv.size() == 1) {
        r.high = true;  // a type the knowledge base does not mention
        return r;
      }
    }
  }
  loose();
  return r;
}

// ---------------------------------------------------------------------------
// Per-file scan.

struct FileResult {
  std::vector<CompatIssue> issues;
  int call_sites = 0;
  std::optional<extraction::SkippedFile> skipped;
};

class BodyWalker {
 public:
  BodyWalker(std::span<const Token> t, const MethodScope& scope, const FileResolver& files,
             const KbIndex& kb, const Interval& universe, const Interval& range,
             const std::string& path, FileResult& out)
      : t_(t), scope_(scope), files_(files), kb_(kb), u_(universe), range_(range), path_(path),
        out_(out) {}

  void visit(const Stmt& s, Interval cur) {
    switch (s.kind) {
      case StmtKind::kBlock:
        sequence(s.children, cur);
        return;
      case StmtKind::kSwitch:
        calls(s.header, cur);
        sequence(s.children, cur);
        return;
      case StmtKind::kIf: {
        calls(s.header, cur);
        const ConditionEval ev(t_, u_);
        const Interval then_levels = intersect(cur, ev.eval(s.condition.begin, s.condition.end, true));
        const Interval else_levels =
            intersect(cur, ev.eval(s.condition.begin, s.condition.end, false));
        if (!s.children.empty()) visit(s.children[0], then_levels);
        if (s.children.size() > 1) visit(s.children[1], else_levels);
        return;
      }
      case StmtKind::kLoop:
      case StmtKind::kSynchronized:
      case StmtKind::kCatch:
      case StmtKind::kFinally:
      case StmtKind::kLabeled:
      case StmtKind::kTry:
        calls(s.header, cur);
        for (const Stmt& c : s.children) visit(c, cur);
        return;
      case StmtKind::kEmpty:
      case StmtKind::kSwitchLabel:
        return;
      default:
        calls(s.tokens, cur);
        return;
    }
  }

 private:
  void sequence(const std::vector<Stmt>& stmts, Interval cur) {
    const ConditionEval ev(t_, u_);
    for (const Stmt& s : stmts) {
      visit(s, cur);
      if (s.kind != StmtKind::kIf || s.children.empty()) continue;
      // Early exit: what follows runs only when the exiting branch was not taken.
      if (exits(s.children[0], t_)) {
        cur = intersect(cur, ev.eval(s.condition.begin, s.condition.end, false));
      } else if (s.has_else && s.children.size() > 1 && exits(s.children[1], t_)) {
        cur = intersect(cur, ev.eval(s.condition.begin, s.condition.end, true));
      }
    }
  }

  void calls(TokenRange range, const Interval& cur) {
    if (range.empty()) return;
    for (const CallExpr& c : java::find_calls(t_, range)) {
      ++out_.call_sites;
      const Resolution res = resolve_call(c, scope_, files_, kb_);
      if (res.entries.empty()) continue;
      CallSite site;
      site.file = path_;
      site.line = t_[c.name_token].line;
      site.class_fqn = res.class_fqn;
      site.method_name = c.name;
      site.arg_count = c.arg_count;
      site.guard = {cur, cur == u_};
      const Interval reachable = intersect(range_, cur);
      for (const auto& e : res.entries) {
        if (!violates(e, reachable)) continue;
        CompatIssue issue;
        issue.call_site = site;
        issue.entry = e;
        issue.reachable = reachable;
        issue.confidence = res.high ? "high" : "low";
        issue.explanation = explain(e, reachable);
        out_.issues.push_back(std::move(issue));
      }
    }
  }

  static std::string explain(const kb::IncompatibilityEntry& e, const Interval& reachable) {
    const std::string r = interval_string(reachable);
    if (e.labels.contains(IncompatLabel::kAddition)) {
      return "added at level " + std::to_string(e.boundary.to.value()) + ", reachable " + r +
             " includes earlier levels";
    }
    if (e.labels.contains(IncompatLabel::kRemoval)) {
      return "removed after level " + std::to_string(e.boundary.from.value()) + ", reachable " +
             r + " includes later levels";
    }
    return "behaviour changes across " + boundary_string(e.boundary) + ", reachable " + r +
           " spans both sides";
  }

  std::span<const Token> t_;
  const MethodScope& scope_;
  const FileResolver& files_;
  const KbIndex& kb_;
  Interval u_;
  Interval range_;
  const std::string& path_;
  FileResult& out_;
};

FileResult scan_file(const SourceFile& file, const KbIndex& kb, const Interval& universe,
                     const Interval& range) {
  FileResult out;
  java::CompilationUnit cu;
  try {
    cu = java::parse_compilation_unit(file.text);
  } catch (const Error& e) {
    out.skipped = extraction::SkippedFile{file.path, e.what()};
    return out;
  }
  const FileResolver files(cu, kb);
  const std::span<const Token> t(cu.tokens);
  for (const auto& type : cu.types) {
    for (const auto& m : type.methods) {
      if (!m.has_body || m.body_begin >= t.size()) continue;
      MethodScope scope{&type, &m, {}};
      for (const auto& f : type.fields) scope.variables[f.name] = f.type;
      for (const auto& p : m.params) scope.variables[p.name] = p.type;
      for (auto& [name, vtype] : local_variables(t, m.body_begin, std::min(m.body_end + 1, t.size()))) {
        scope.variables.emplace(name, vtype);
      }
      const Stmt body = java::parse_block(t.first(std::min(m.body_end + 1, t.size())), m.body_begin);
      BodyWalker walker(t, scope, files, kb, universe, range, file.path, out);
      walker.visit(body, universe);
    }
  }
  return out;
}

std::optional<std::filesystem::path> find_manifest(const std::filesystem::path& root) {
  const auto direct = root / "AndroidManifest.xml";
  if (std::filesystem::exists(direct)) return direct;
  std::vector<std::filesystem::path> found;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "AndroidManifest.xml") {
      found.push_back(entry.path());
    }
  }
  if (found.empty()) return std::nullopt;
  std::sort(found.begin(), found.end());
  return found.front();
}

}  // namespace

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::string interval_string(const Interval& i) {
  if (i.empty()) return "empty";
  return std::to_string(i.lo) + ":" + std::to_string(i.hi);
}

SdkRange parse_sdk_range(std::string_view text) {
  const auto colon = text.find(':');
  const auto lo = colon == std::string_view::npos ? std::nullopt : to_int(text.substr(0, colon));
  const auto hi = colon == std::string_view::npos ? std::nullopt : to_int(text.substr(colon + 1));
  if (!lo || !hi || *lo < 1 || *lo > *hi) {
    throw Error(ErrorCode::kValidation,
                "SDK range must be MIN:MAX with 1 <= MIN <= MAX, got '" + std::string(text) + "'");
  }
  return {ApiLevel(*lo), ApiLevel(*hi)};
}

ManifestInfo parse_manifest(std::string_view xml_text, int max_level) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml_text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kManifestParse, std::string("malformed manifest: ") + e.what());
  }
  const auto manifest = tree.get_child_optional("manifest");
  if (!manifest) throw Error(ErrorCode::kManifestParse, "manifest root element missing");

  ManifestInfo info{{ApiLevel(1), ApiLevel(max_level)}, std::nullopt, {}};
  const auto uses_sdk = manifest->get_child_optional("uses-sdk");
  if (!uses_sdk) {
    info.warnings.push_back("no uses-sdk element; assuming 1:" + std::to_string(max_level));
    return info;
  }
  auto attribute = [&](const char* name) -> std::optional<int> {
    const auto raw = uses_sdk->get_optional<std::string>(std::string("<xmlattr>.android:") + name);
    if (!raw) return std::nullopt;
    const auto v = to_int(*raw);
    if (!v || *v < 1) {
      throw Error(ErrorCode::kManifestParse,
                  std::string("android:") + name + " is not a positive integer: '" + *raw + "'");
    }
    return v;
  };
  const auto min = attribute("minSdkVersion");
  const auto max = attribute("maxSdkVersion");
  info.target_sdk = attribute("targetSdkVersion");
  if (!min) info.warnings.push_back("no android:minSdkVersion; assuming 1");
  const int lo = min.value_or(1);
  const int hi = max.value_or(max_level);
  if (lo > hi) {
    throw Error(ErrorCode::kManifestParse, "minSdkVersion " + std::to_string(lo) +
                                               " exceeds maxSdkVersion " + std::to_string(hi));
  }
  info.range = {ApiLevel(lo), ApiLevel(hi)};
  return info;
}

Interval condition_levels(std::span<const Token> condition, bool polarity,
                          const Interval& universe) {
  return ConditionEval(condition, universe).eval(0, condition.size(), polarity);
}

GuardConstraint extract_guard(std::span<const BranchCondition> chain, int max_level) {
  const Interval universe{1, max_level};
  Interval cur = universe;
  for (const auto& c : chain) {
    const auto tokens = java::lex_code(c.condition);
    cur = intersect(cur, condition_levels(tokens, c.polarity, universe));
  }
  return {cur, cur == universe};
}

bool violates(const kb::IncompatibilityEntry& entry, const Interval& reachable) {
  if (reachable.empty()) return false;
  const int x = entry.boundary.from.value();
  const int x1 = entry.boundary.to.value();
  if (entry.kind == kb::EntryKind::kSignature) {
    if (entry.labels.contains(IncompatLabel::kAddition)) return reachable.lo <= x;
    return reachable.hi >= x1;
  }
  return reachable.lo <= x && reachable.hi >= x1;
}

CheckReport check_sources(std::span<const SourceFile> files, const SdkRange& range,
                          const kb::KnowledgeBase& kb, int jobs) {
  const KbIndex index = index_kb(kb);
  const Interval universe{1, std::max(kb.max_level(), range.max_level.value())};
  std::vector<FileResult> results(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    results[i] = scan_file(files[i], index, universe, range.interval());
  });

  CheckReport report;
  report.range = range;
  report.files_scanned = static_cast<int>(files.size());
  for (auto& r : results) {
    report.call_sites += r.call_sites;
    if (r.skipped) report.skipped.push_back(*r.skipped);
    std::move(r.issues.begin(), r.issues.end(), std::back_inserter(report.issues));
  }
  std::stable_sort(report.issues.begin(), report.issues.end(), [](const auto& a, const auto& b) {
    const auto ka = std::make_tuple(a.call_site.file, a.call_site.line,
                                    render_signature(a.entry.signature), a.entry.boundary,
                                    a.entry.kind);
    const auto kb2 = std::make_tuple(b.call_site.file, b.call_site.line,
                                     render_signature(b.entry.signature), b.entry.boundary,
                                     b.entry.kind);
    return ka < kb2;
  });
  return report;
}

CheckReport check_app(const std::filesystem::path& app_root, const kb::KnowledgeBase& kb,
                      const CheckOptions& options) {
  if (!std::filesystem::is_directory(app_root)) {
    throw Error(ErrorCode::kInput, "app directory not found: " + app_root.string());
  }
  std::optional<ManifestInfo> manifest;
  std::vector<std::string> warnings;
  if (const auto path = find_manifest(app_root)) {
    manifest = parse_manifest(read_file(*path), kb.max_level());
    warnings = manifest->warnings;
  } else if (!options.assume_range && !options.allow_missing_manifest) {
    throw Error(ErrorCode::kManifestMissing,
                "no AndroidManifest.xml under " + app_root.string() +
                    " (pass --assume-sdk-range or --allow-missing-manifest)");
  } else if (!options.assume_range) {
    warnings.push_back("no manifest; assuming 1:" + std::to_string(kb.max_level()));
  }
  const SdkRange range = options.assume_range ? *options.assume_range
                         : manifest          ? manifest->range
                                             : SdkRange{ApiLevel(1), ApiLevel(kb.max_level())};

  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(app_root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<SourceFile> files;
  files.reserve(paths.size());
  for (const auto& p : paths) {
    files.push_back({std::filesystem::relative(p, app_root).generic_string(), read_file(p)});
  }
  CheckReport report = check_sources(files, range, kb, options.jobs);
  report.manifest = manifest;
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  return report;
}

std::string issues_jsonl(const CheckReport& report) {
  std::vector<io::json> rows;
  for (const auto& i : report.issues) {
    io::json j;
    j["file"] = i.call_site.file;
    j["line"] = i.call_site.line;
    j["signature"] = render_signature(i.entry.signature);
    j["boundary"] = io::boundary_to_json(i.entry.boundary);
    j["kind"] = std::string(kb::entry_kind_name(i.entry.kind));
    j["labels"] = label_names(i.entry.labels);
    j["reachable"] = io::json::array({i.reachable.lo, i.reachable.hi});
    j["confidence"] = i.confidence;
    j["explanation"] = i.explanation;
    rows.push_back(std::move(j));
  }
  return io::to_jsonl(rows);
}

std::string summary_table(const CheckReport& report) {
  std::ostringstream os;
  os << "# intraprocedural check: guards are credited only from enclosing conditionals and\n"
        "# early exits in the same method; guards in helper methods are not seen.\n";
  os << "sdk range: " << report.range.min_level.value() << ":" << report.range.max_level.value();
  if (report.manifest && report.manifest->target_sdk) {
    os << " (targetSdkVersion " << *report.manifest->target_sdk << ")";
  }
  os << "\nfiles: " << report.files_scanned << "  call sites: " << report.call_sites
     << "  issues: " << report.issues.size() << "\n";
  for (const auto& w : report.warnings) os << "warning: " << w << "\n";
  for (const auto& s : report.skipped) os << "skipped: " << s.path << ": " << s.reason << "\n";
  if (report.issues.empty()) return os.str();
  os << "\nfile:line\tkind\tlabels\tboundary\treachable\tconfidence\tsignature\n";
  for (const auto& i : report.issues) {
    std::string labels;
    for (IncompatLabel l : members(i.entry.labels)) {
      if (!labels.empty()) labels += ',';
      labels += label_short_name(l);
    }
    os << i.call_site.file << ":" << i.call_site.line << "\t" << kb::entry_kind_name(i.entry.kind)
       << "\t" << labels << "\t" << boundary_string(i.entry.boundary) << "\t"
       << interval_string(i.reachable) << "\t" << i.confidence << "\t"
       << render_signature(i.entry.signature) << "\n";
  }
  return os.str();
}

}  // namespace apicompat::appcheck
