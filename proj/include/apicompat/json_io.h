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

// Line-delimited JSON (de)serialization of the pipeline's record types.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "apicompat/change_classifier.h"
#include "apicompat/knowledge_base.h"
#include "apicompat/types.h"

namespace apicompat::io {

using nlohmann::json;

json record_to_json(const ApiRecord& r);
ApiRecord record_from_json(const json& j);

json entry_to_json(const kb::IncompatibilityEntry& e);
kb::IncompatibilityEntry entry_from_json(const json& j);

json change_report_to_json(const changes::ChangeReport& r);
changes::ChangeReport change_report_from_json(const json& j);

/// Benchmark / demonstration line. Throws Error(kSchema) on unknown
/// labels or a NoChange set mixed with other change types.
LabeledPair labeled_pair_from_json(const json& j);
json labeled_pair_to_json(const LabeledPair& p);

json boundary_to_json(const Boundary& b);  // [x, x1]
Boundary boundary_from_json(const json& j);

/// One compact object per line, each terminated by '\n'.
std::string to_jsonl(const std::vector<json>& rows);

/// Parses non-blank lines. Throws Error(kSchema) naming `source` and the
/// 1-based line number.
std::vector<json> parse_jsonl(std::string_view text, std::string_view source);

/// Deterministic pretty form (sorted keys, two-space indent, trailing LF).
std::string pretty(const json& j);

}  // namespace apicompat::io
