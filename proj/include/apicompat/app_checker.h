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

// Flags application call sites of knowledge-base APIs whose reachable SDK
// range (manifest range intersected with enclosing SDK_INT guards) crosses
// the API's incompatibility boundary. Analysis is intraprocedural: only
// guards in the lexically enclosing conditionals of the call, and early
// exits before it in the same block, are credited.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apicompat/extraction.h"
#include "apicompat/java_lexer.h"
#include "apicompat/knowledge_base.h"

namespace apicompat::appcheck {

/// Closed level interval; empty when lo > hi.
struct Interval {
  int lo = 1;
  int hi = 0;

  bool empty() const { return lo > hi; }
  bool contains(int level) const { return lo <= level && level <= hi; }
  bool operator==(const Interval&) const = default;
};

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
std::string interval_string(const Interval& i);  // "15:33", or "empty"

struct SdkRange {
  ApiLevel min_level;
  ApiLevel max_level;

  Interval interval() const { return {min_level.value(), max_level.value()}; }
  bool operator==(const SdkRange&) const = default;
};

/// "MIN:MAX". Throws Error(kValidation).
SdkRange parse_sdk_range(std::string_view text);

struct ManifestInfo {
  SdkRange range;
  std::optional<int> target_sdk;  // reported only
  std::vector<std::string> warnings;
};

/// Reads uses-sdk from AndroidManifest.xml text. minSdkVersion defaults to
/// 1 and maxSdkVersion to `max_level`. Throws Error(kManifestParse).
ManifestInfo parse_manifest(std::string_view xml_text, int max_level = kb::kDefaultMaxLevel);

struct GuardConstraint {
  Interval interval;
  bool unconstrained = true;  // interval is the whole supported range
};

/// Levels (over-approximated) at which `condition` evaluates to `polarity`.
/// Recognizes comparisons of any `...SDK_INT` against an integer literal or a
/// `VERSION_CODES` constant, combined with &&, || and !; anything else is
/// treated as unknown and constrains nothing.
Interval condition_levels(std::span<const java::Token> condition, bool polarity,
                          const Interval& universe);

struct BranchCondition {
  std::string condition;  // text inside the parentheses
  bool polarity = true;   // false for the else branch / after an early exit
};

/// Intersection of every recognized condition in the chain.
GuardConstraint extract_guard(std::span<const BranchCondition> chain,
                              int max_level = kb::kDefaultMaxLevel);

struct CallSite {
  std::string file;
  int line = 0;
  std::string class_fqn;  // resolved receiver type, empty when unresolved
  std::string method_name;
  int arg_count = 0;
  GuardConstraint guard;
};

struct CompatIssue {
  CallSite call_site;
  kb::IncompatibilityEntry entry;
  Interval reachable;
  std::string confidence;  // "high" | "low"
  std::string explanation;
};

/// The safety rule: Addition at (x, x1) needs a reachable level <= x,
/// Removal one >= x1, and a semantic entry needs levels on both sides.
bool violates(const kb::IncompatibilityEntry& entry, const Interval& reachable);

struct SourceFile {
  std::string path;  // as reported
  std::string text;
};

struct CheckOptions {
  std::optional<SdkRange> assume_range;  // overrides the manifest
  bool allow_missing_manifest = false;
  int jobs = 1;
};

struct CheckReport {
  std::optional<ManifestInfo> manifest;
  SdkRange range;
  std::vector<CompatIssue> issues;  // ordered by (file, line, signature)
  int call_sites = 0;
  int files_scanned = 0;
  std::vector<extraction::SkippedFile> skipped;
  std::vector<std::string> warnings;
};

/// Checks in-memory sources against `range`.
CheckReport check_sources(std::span<const SourceFile> files, const SdkRange& range,
                          const kb::KnowledgeBase& kb, int jobs = 1);

/// Scans `app_root` for AndroidManifest.xml and **/*.java. Throws
/// Error(kManifestMissing) when no manifest is found unless a range is
/// assumed or missing manifests are allowed.
CheckReport check_app(const std::filesystem::path& app_root, const kb::KnowledgeBase& kb,
                      const CheckOptions& options = {});

/// One JSON object per issue: file, line, signature, boundary, kind,
/// labels, reachable, confidence.
std::string issues_jsonl(const CheckReport& report);

/// Human-readable table with a header noting the analysis scope.
std::string summary_table(const CheckReport& report);

}  // namespace apicompat::appcheck
