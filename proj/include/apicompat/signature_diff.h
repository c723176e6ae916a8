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

#include <span>
#include <utility>
#include <vector>

#include "apicompat/knowledge_base.h"
#include "apicompat/types.h"

namespace apicompat::sigdiff {

struct SignatureDiff {
  ApiLevel level_x;
  ApiLevel level_x1;
  std::vector<ApiSignature> added;    // sorted by canonical string
  std::vector<ApiSignature> removed;  // sorted by canonical string
  std::vector<std::pair<ApiRecord, ApiRecord>> retained_changed;
  int retained_identical = 0;

  Boundary boundary() const { return {level_x, level_x1}; }
};

/// Set difference over identity keys between two adjacent levels. Retained
/// pairs are split by exact comparison of body, annotations, comment, and
/// return type. Throws Error(kInternalConsistency) on duplicate identity
/// keys within a level and Error(kPrecondition) on level mismatches.
SignatureDiff diff_levels(ApiLevel level_x, std::span<const ApiRecord> facts_x,
                          ApiLevel level_x1, std::span<const ApiRecord> facts_x1);

/// Same, with levels taken from the records. Both lists must be non-empty.
SignatureDiff diff_levels(std::span<const ApiRecord> facts_x,
                          std::span<const ApiRecord> facts_x1);

/// One Addition entry per added key, one Removal entry per removed key,
/// sorted by canonical signature string.
std::vector<kb::IncompatibilityEntry> detect_signature_incompat(const SignatureDiff& diff,
                                                                const std::string& provenance = "");

}  // namespace apicompat::sigdiff
