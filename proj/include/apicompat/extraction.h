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

// Per-level method fact extraction from a version-indexed source corpus laid
// out as <root>/<level>/**/*.java.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "apicompat/types.h"

namespace apicompat::extraction {

/// Pluggable source-to-facts extractor. The default is a lightweight lexer;
/// a full front end can be dropped in behind this interface.
class MethodExtractor {
 public:
  virtual ~MethodExtractor() = default;
  virtual std::vector<ApiRecord> extract(std::string_view source_text, ApiLevel level,
                                         const std::string& file_path) const = 0;
};

class LexerExtractor : public MethodExtractor {
 public:
  std::vector<ApiRecord> extract(std::string_view source_text, ApiLevel level,
                                 const std::string& file_path) const override;
};

/// One method record per method or constructor declaration, including
/// nested member types. Throws Error(kExtraction) on unrecoverable input.
std::vector<ApiRecord> extract_api_records(std::string_view source_text, ApiLevel level,
                                           const std::string& file_path);

struct SkippedFile {
  std::string path;
  std::string reason;
};

struct FileDigest {
  std::string path;  // "<level>/<relative path>"
  std::string sha256;
};

struct ScanReport {
  std::vector<SkippedFile> skipped;  // extraction failures
  std::vector<int> missing_levels;   // requested but absent
  int non_source_files = 0;
  int duplicate_records = 0;         // dropped by identity-key dedup
  int private_records = 0;           // dropped by public-only filtering
  std::vector<FileDigest> inputs;
};

struct CorpusIndex {
  std::vector<ApiLevel> levels;  // strictly increasing
  std::map<ApiLevel, std::vector<ApiRecord>> facts;
  std::map<ApiLevel, std::filesystem::path> source_roots;
  ScanReport report;

  std::size_t record_count() const;
};

struct ScanOptions {
  bool public_only = false;
  int jobs = 1;
  std::shared_ptr<const MethodExtractor> extractor;  // defaults to LexerExtractor
};

/// Scans every integer-named level directory of `root` within
/// [level_min, level_max]. Records in each level are ordered by (file path,
/// source offset) and deduplicated by identity key, keeping the record from
/// the lexicographically smallest path.
CorpusIndex scan_corpus(const std::filesystem::path& root, ApiLevel level_min,
                        ApiLevel level_max, const ScanOptions& options = {});

/// Keeps the first record per identity key; returns how many were dropped.
int deduplicate_level(std::vector<ApiRecord>& records);

}  // namespace apicompat::extraction
