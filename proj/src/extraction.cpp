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

#include "apicompat/extraction.h"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "apicompat/error.h"
#include "apicompat/java_source.h"
#include "apicompat/util.h"

namespace fs = std::filesystem;

namespace apicompat::extraction {

std::vector<ApiRecord> LexerExtractor::extract(std::string_view source_text, ApiLevel level,
                                               const std::string& file_path) const {
  const java::CompilationUnit unit = java::parse_compilation_unit(source_text);
  std::vector<ApiRecord> out;
  for (const java::TypeDecl& type : unit.types) {
    for (const java::MethodDecl& m : type.methods) {
      ApiRecord r;
      r.signature.class_fqn = type.qualified_name;
      r.signature.method_name = m.is_constructor ? type.simple_name : m.name;
      r.signature.return_type = m.return_type;
      for (const java::Variable& p : m.params) r.signature.param_types.push_back(p.type);
      r.level = level;
      if (m.has_body) {
        const std::size_t begin = unit.tokens[m.body_begin].offset;
        const std::size_t end = unit.tokens[m.body_end].end();
        r.body = std::string(source_text.substr(begin, end - begin));
      }
      r.annotations = m.annotations;
      r.comment = m.doc_comment;
      r.thrown_types = m.thrown_types;
      r.file = file_path;
      r.line = m.line;
      r.is_public = m.is_public && type.is_public;
      out.push_back(std::move(r));
    }
  }
  // Nested types are appended after their enclosing type; restore source
  // order so output follows declaration offsets.
  std::stable_sort(out.begin(), out.end(),
                   [](const ApiRecord& a, const ApiRecord& b) { return a.line < b.line; });
  return out;
}

std::vector<ApiRecord> extract_api_records(std::string_view source_text, ApiLevel level,
                                           const std::string& file_path) {
  return LexerExtractor().extract(source_text, level, file_path);
}

std::size_t CorpusIndex::record_count() const {
  std::size_t n = 0;
  for (const auto& [level, records] : facts) n += records.size();
  return n;
}

int deduplicate_level(std::vector<ApiRecord>& records) {
  std::unordered_set<std::string> seen;
  const std::size_t before = records.size();
  std::erase_if(records, [&](const ApiRecord& r) {
    return !seen.insert(r.signature.identity_key()).second;
  });
  return static_cast<int>(before - records.size());
}

namespace {

std::optional<int> parse_level_dir(const std::string& name) {
  int value = 0;
  const char* first = name.data();
  const char* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 1) return std::nullopt;
  return value;
}

struct FileResult {
  std::vector<ApiRecord> records;
  std::string error;
  std::string sha256;
};

}  // namespace

CorpusIndex scan_corpus(const fs::path& root, ApiLevel level_min, ApiLevel level_max,
                        const ScanOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kCorpusNotFound, "corpus not found: " + root.string());
  }
  if (level_max < level_min) {
    throw Error(ErrorCode::kValidation, "empty level range");
  }
  const auto extractor = options.extractor ? options.extractor
                                           : std::make_shared<LexerExtractor>();
  CorpusIndex index;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const auto level = parse_level_dir(entry.path().filename().string());
    if (!level || *level < level_min.value() || *level > level_max.value()) continue;
    index.source_roots[ApiLevel(*level)] = entry.path();
  }
  if (index.source_roots.empty()) {
    throw Error(ErrorCode::kEmptyCorpus,
                "no level directories in [" + std::to_string(level_min.value()) + ", " +
                    std::to_string(level_max.value()) + "] under " + root.string());
  }
  for (int l = level_min.value(); l <= level_max.value(); ++l) {
    if (!index.source_roots.contains(ApiLevel(l))) index.report.missing_levels.push_back(l);
  }

  struct Job {
    ApiLevel level;
    fs::path path;
    std::string relative;
  };
  std::vector<Job> jobs;
  for (const auto& [level, dir] : index.source_roots) {
    index.levels.push_back(level);
    index.facts[level];
    std::vector<Job> level_jobs;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().extension() != ".java") {
        ++index.report.non_source_files;
        continue;
      }
      level_jobs.push_back(
          {level, entry.path(), fs::relative(entry.path(), dir).generic_string()});
    }
    std::sort(level_jobs.begin(), level_jobs.end(),
              [](const Job& a, const Job& b) { return a.relative < b.relative; });
    jobs.insert(jobs.end(), level_jobs.begin(), level_jobs.end());
  }

  std::vector<FileResult> results(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    FileResult& out = results[i];
    std::string text;
    try {
      text = read_file(job.path);
    } catch (const Error& e) {
      out.error = e.what();
      return;
    }
    out.sha256 = sha256_hex(text);
    try {
      out.records = extractor->extract(text, job.level, job.relative);
    } catch (const Error& e) {
      out.error = e.what();
      out.records.clear();
    }
  });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    FileResult& result = results[i];
    const std::string tagged = std::to_string(job.level.value()) + "/" + job.relative;
    if (!result.sha256.empty()) index.report.inputs.push_back({tagged, result.sha256});
    if (!result.error.empty()) {
      index.report.skipped.push_back({tagged, result.error});
      continue;
    }
    auto& bucket = index.facts[job.level];
    for (ApiRecord& r : result.records) {
      if (options.public_only && !r.is_public) {
        ++index.report.private_records;
        continue;
      }
      bucket.push_back(std::move(r));
    }
  }
  for (auto& [level, records] : index.facts) {
    index.report.duplicate_records += deduplicate_level(records);
  }
  return index;
}

}  // namespace apicompat::extraction
