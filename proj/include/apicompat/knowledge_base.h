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

// Persistent set of incompatibility entries, the lifetime and semantic-list
// exports, and the per-boundary statistics table.

#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apicompat/change_classifier.h"
#include "apicompat/types.h"

namespace apicompat::kb {

enum class EntryKind { kSignature, kSemantic };

std::string_view entry_kind_name(EntryKind k);  // "signature" | "semantic"

struct IncompatibilityEntry {
  ApiSignature signature;
  Boundary boundary;
  EntryKind kind;
  LabelSet labels;
  std::string provenance;
};

/// Throws Error(kValidation) unless labels are non-empty and match the kind.
/// A signature entry carries exactly one of Addition/Removal.
void validate_entry(const IncompatibilityEntry& e);

/// Equality over the exported fields (provenance excluded).
bool same_exported_fields(const IncompatibilityEntry& a, const IncompatibilityEntry& b);

class KnowledgeBase {
 public:
  /// Entries ordered by (canonical signature, boundary, kind).
  std::vector<IncompatibilityEntry> entries() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Levels of the corpus the entries were mined from; lifespans are
  /// reconstructed against its first and last level.
  const std::vector<ApiLevel>& corpus_levels() const { return corpus_levels_; }
  void set_corpus_levels(std::vector<ApiLevel> levels);

  /// Highest level an application can run on: max(33, last corpus level).
  int max_level() const;

  /// Union by (identity key, boundary, kind); labels are unioned on
  /// collision. Validates every entry first.
  void merge(std::span<const IncompatibilityEntry> entries);

 private:
  struct Key {
    std::string identity;
    Boundary boundary;
    EntryKind kind;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, IncompatibilityEntry> entries_;
  std::vector<ApiLevel> corpus_levels_;
};

inline constexpr int kDefaultMaxLevel = 33;

/// Functional form of KnowledgeBase::merge. Idempotent.
KnowledgeBase merge_entries(KnowledgeBase kb, std::span<const IncompatibilityEntry> entries);

/// android_api_lifetime.txt: a header comment naming the corpus levels, then
/// `<signature>\t<first level>\t<last level>` per presence interval,
/// sorted by signature.
std::string export_cid_lifetime(const KnowledgeBase& kb);

/// android_api_semantic.txt: a header comment, then
/// `<signature>\t<x>:<x1>\t<RVA,EHM>` sorted by (signature, boundary).
std::string export_semantic_list(const KnowledgeBase& kb);

/// Rebuilds a knowledge base from the two exports. Throws Error(kSchema).
KnowledgeBase import_exports(std::string_view lifetime_text, std::string_view semantic_text);

/// Reads <dir>/android_api_lifetime.txt and <dir>/android_api_semantic.txt.
KnowledgeBase import_directory(const std::filesystem::path& dir);

struct PresenceInterval {
  ApiSignature signature;
  int first_level;
  int last_level;
};

/// Presence intervals reconstructed from Addition/Removal entries: an API
/// added at (x, x1) first exists at x1; one removed at (x, x1) last exists
/// at x.
std::vector<PresenceInterval> lifespans(const KnowledgeBase& kb);

struct LevelStatsRow {
  std::string boundary;  // "15:16" or "total"
  int additions = 0;
  int removals = 0;
  int rva_only = 0;
  int ehm_only = 0;
  int both = 0;
  std::array<int, kChangeTypeCount> change_types{};  // ChangeType order
  int accumulated = 0;
};

/// Per-boundary rows in boundary order plus a trailing "total" row.
std::vector<LevelStatsRow> stats(const KnowledgeBase& kb,
                                 std::span<const changes::ChangeReport> reports);

std::string stats_csv(std::span<const LevelStatsRow> rows);

/// Appends to the line-delimited JSON journal only the entries it does not
/// already hold, so re-running a stage leaves it unchanged.
void append_journal(const std::filesystem::path& path, const KnowledgeBase& kb);
KnowledgeBase load_journal(const std::filesystem::path& path);

}  // namespace apicompat::kb
