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

// Declaration-level view of a Java compilation unit: types, fields and
// methods with their raw text spans. Method bodies are not parsed here; see
// statements.h.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apicompat/java_lexer.h"

namespace apicompat::java {

struct Variable {
  std::string type;  // erased, as written
  std::string name;
};

struct MethodDecl {
  std::string name;
  std::string return_type;  // "void" for constructors
  std::vector<Variable> params;
  std::vector<std::string> thrown_types;
  std::vector<std::string> annotations;
  std::string doc_comment;  // cleaned text, empty when absent
  bool is_constructor = false;
  bool is_public = false;  // public/protected or implicitly public
  bool has_body = false;
  std::size_t body_begin = 0;  // token index of '{'
  std::size_t body_end = 0;    // token index of '}'
  int line = 0;
};

struct TypeDecl {
  std::string simple_name;
  std::string qualified_name;  // package + enclosing chain, '.'-joined
  std::string kind;            // class | interface | enum | record | @interface
  std::string extends;         // first supertype as written, may be empty
  bool is_public = false;      // this type and every enclosing type visible
  std::vector<Variable> fields;
  std::vector<MethodDecl> methods;
};

struct CompilationUnit {
  std::string package_name;
  std::vector<std::string> imports;  // as written, static imports excluded
  std::vector<TypeDecl> types;       // nested types flattened, source order
  std::vector<Token> tokens;         // code tokens; method body indices refer here
};

/// Parses one compilation unit. Throws Error(kExtraction) when braces are
/// unbalanced beyond recovery.
CompilationUnit parse_compilation_unit(std::string_view source);

/// Renders a type from its tokens: annotations dropped, generic arguments
/// erased, whitespace removed, varargs turned into arrays.
std::string render_type(std::span<const Token> tokens);

/// Strips comment delimiters and leading '*' gutters; lines trimmed and
/// '\n'-joined.
std::string clean_doc_comment(std::string_view raw);

}  // namespace apicompat::java
