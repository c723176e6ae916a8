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

#include <string>
#include <string_view>
#include <vector>

#include "apicompat/types.h"

namespace apicompat::changes {

struct Evidence {
  ChangeType type;
  std::string old_snippet;
  std::string new_snippet;
};

struct ChangeReport {
  ApiSignature signature;  // the later version's signature
  Boundary boundary;
  ChangeTypeSet change_types;
  std::vector<Evidence> evidence;
};

/// Comments stripped (literal-aware), whitespace runs collapsed, trimmed.
std::string normalize_body(std::string_view body);

/// Multi-label classification of the code change between two versions of
/// the same API. Each facet (return, exception handling, control
/// dependency, dependent API) is compared as a multiset of normalized
/// statement texts; any remaining statement-level difference is reported as
/// OtherStatementChanged. Bodies with equal token streams yield {NoChange}
/// unless the return type changed. Throws Error(kPrecondition) when the two
/// records have different identity keys.
ChangeReport classify_change(const ApiRecord& old_record, const ApiRecord& new_record);

/// Optional cross-check: marks DependentApiChanged when the new body calls
/// (by name and arity) a method whose own signature was added or removed at
/// the same boundary.
void apply_corpus_dependencies(ChangeReport& report, const ApiRecord& new_record,
                               const std::vector<ApiSignature>& changed_at_boundary);

/// Node-tree rendering of a method body: a one-line tree followed by one
/// line per node, indented two spaces per depth.
std::string to_ast_text(std::string_view body);

}  // namespace apicompat::changes
