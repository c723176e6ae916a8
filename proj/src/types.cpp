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

#include "apicompat/types.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "apicompat/error.h"
#include "apicompat/java_lexer.h"
#include "apicompat/java_source.h"

namespace apicompat {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCorpusNotFound: return "corpus-not-found";
    case ErrorCode::kEmptyCorpus: return "empty-corpus";
    case ErrorCode::kExtraction: return "extraction-error";
    case ErrorCode::kSignatureParse: return "signature-parse-error";
    case ErrorCode::kInternalConsistency: return "internal-consistency-error";
    case ErrorCode::kPrecondition: return "precondition-error";
    case ErrorCode::kConfiguration: return "configuration-error";
    case ErrorCode::kMalformedOutput: return "malformed-output";
    case ErrorCode::kBackendUnavailable: return "backend-unavailable";
    case ErrorCode::kValidation: return "validation-error";
    case ErrorCode::kManifestParse: return "manifest-parse-error";
    case ErrorCode::kManifestMissing: return "manifest-missing";
    case ErrorCode::kSchema: return "schema-error";
    case ErrorCode::kInput: return "input-error";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kIo: return "io-error";
  }
  return "error";
}

ApiLevel::ApiLevel(int value) : value_(value) {
  if (value < 1) {
    throw Error(ErrorCode::kValidation,
                "API level must be >= 1, got " + std::to_string(value));
  }
}

std::string boundary_string(const Boundary& b) {
  return std::to_string(b.from.value()) + ":" + std::to_string(b.to.value());
}

std::string ApiSignature::identity_key() const {
  std::string key = class_fqn;
  key += '#';
  key += method_name;
  key += '(';
  for (std::size_t i = 0; i < param_types.size(); ++i) {
    if (i) key += ',';
    key += param_types[i];
  }
  key += ')';
  return key;
}

bool ApiSignature::same_identity(const ApiSignature& other) const {
  return class_fqn == other.class_fqn && method_name == other.method_name &&
         param_types == other.param_types;
}

std::string render_signature(const ApiSignature& sig) {
  std::string out = "<" + sig.class_fqn + ": " + sig.return_type + " " +
                    sig.method_name + "(";
  for (std::size_t i = 0; i < sig.param_types.size(); ++i) {
    if (i) out += ',';
    out += sig.param_types[i];
  }
  out += ")>";
  return out;
}

ApiSignature normalize_signature(std::string_view raw) {
  using java::Token;
  using java::TokenKind;
  std::vector<Token> tokens;
  try {
    tokens = java::lex_code(raw);
  } catch (const Error& e) {
    throw SignatureParseError(0, e.what());
  }
  auto offset_of = [&](std::size_t k) {
    return k < tokens.size() ? tokens[k].offset : raw.size();
  };
  if (tokens.size() < 2 || !tokens.front().is("<") || !tokens.back().is(">")) {
    throw SignatureParseError(tokens.empty() ? 0 : tokens.front().offset,
                              "signature must be enclosed in '<' ... '>'");
  }
  const std::size_t last = tokens.size() - 1;
  std::size_t k = 1;
  ApiSignature sig;
  // Class: ident ('.' ident)*
  bool want_ident = true;
  while (k < last && !tokens[k].is(":")) {
    const Token& t = tokens[k];
    if (want_ident && t.kind == TokenKind::kIdentifier) {
      sig.class_fqn.append(t.text);
    } else if (!want_ident && t.is(".")) {
      sig.class_fqn.push_back('.');
    } else {
      throw SignatureParseError(t.offset, "malformed class name");
    }
    want_ident = !want_ident;
    ++k;
  }
  if (sig.class_fqn.empty() || want_ident) {
    throw SignatureParseError(offset_of(k), "missing or malformed class name");
  }
  if (!(k < last && tokens[k].is(":"))) {
    throw SignatureParseError(offset_of(k), "expected ':' after class name");
  }
  ++k;
  std::size_t open = k;
  while (open < last && !tokens[open].is("(")) {
    if (tokens[open].is("<")) {
      const std::size_t close = java::find_matching(tokens, open);
      if (close >= last) throw SignatureParseError(tokens[open].offset, "unbalanced '<'");
      open = close + 1;
      continue;
    }
    ++open;
  }
  if (open >= last) throw SignatureParseError(offset_of(open), "expected '('");
  if (open < k + 2 || tokens[open - 1].kind != TokenKind::kIdentifier) {
    throw SignatureParseError(offset_of(open),
                              "expected return type and method name before '('");
  }
  sig.method_name = std::string(tokens[open - 1].text);
  sig.return_type = java::render_type(std::span<const Token>(tokens).subspan(k, open - 1 - k));
  const std::size_t close = java::find_matching(tokens, open);
  if (close >= last) throw SignatureParseError(tokens[open].offset, "unbalanced '('");
  if (close + 1 != last) {
    throw SignatureParseError(tokens[close + 1].offset, "unexpected text after ')'");
  }
  std::size_t piece = open + 1;
  int depth = 0;
  for (std::size_t p = open + 1; p <= close; ++p) {
    if (p < close) {
      if (tokens[p].is("<")) ++depth;
      if (tokens[p].is(">")) --depth;
      if (!(tokens[p].is(",") && depth == 0)) continue;
    }
    if (p == piece) {
      if (p == close && piece == open + 1) break;  // empty list
      throw SignatureParseError(tokens[p].offset, "empty parameter type");
    }
    sig.param_types.push_back(
        java::render_type(std::span<const Token>(tokens).subspan(piece, p - piece)));
    piece = p + 1;
  }
  return sig;
}

namespace {

constexpr std::array<std::string_view, kChangeTypeCount> kChangeTypeNames = {
    "Return Statement Changed", "Exception Handling Statement Changed",
    "Control Dependency Changed", "Other Statement Changed",
    "Dependent API Changed",    "No Change"};

constexpr std::array<std::string_view, kIncompatLabelCount> kLabelNames = {
    "Addition", "Removal", "Return Value Alteration",
    "Exception Handling Modification"};

constexpr std::array<std::string_view, kIncompatLabelCount> kLabelShortNames = {
    "ADD", "REM", "RVA", "EHM"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view change_type_name(ChangeType t) {
  return kChangeTypeNames[static_cast<int>(t)];
}

std::optional<ChangeType> parse_change_type(std::string_view name) {
  for (int i = 0; i < kChangeTypeCount; ++i) {
    if (iequals(name, kChangeTypeNames[i])) return static_cast<ChangeType>(i);
  }
  return std::nullopt;
}

std::vector<ChangeType> members(const ChangeTypeSet& s) {
  return s.members<kChangeTypeCount>();
}

std::vector<std::string> change_type_names(const ChangeTypeSet& s) {
  std::vector<std::string> out;
  for (ChangeType t : members(s)) out.emplace_back(change_type_name(t));
  return out;
}

std::string_view label_name(IncompatLabel l) { return kLabelNames[static_cast<int>(l)]; }

std::string_view label_short_name(IncompatLabel l) {
  return kLabelShortNames[static_cast<int>(l)];
}

std::optional<IncompatLabel> parse_label(std::string_view name) {
  for (int i = 0; i < kIncompatLabelCount; ++i) {
    if (iequals(name, kLabelNames[i]) || iequals(name, kLabelShortNames[i])) {
      return static_cast<IncompatLabel>(i);
    }
  }
  return std::nullopt;
}

std::vector<IncompatLabel> members(const LabelSet& s) {
  return s.members<kIncompatLabelCount>();
}

std::vector<std::string> label_names(const LabelSet& s) {
  std::vector<std::string> out;
  for (IncompatLabel l : members(s)) out.emplace_back(label_name(l));
  return out;
}

}  // namespace apicompat
