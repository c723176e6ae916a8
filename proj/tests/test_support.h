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

// Shared helpers for the test binaries.

#pragma once

#include <atomic>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unistd.h>

#include "apicompat/extraction.h"
#include "apicompat/knowledge_base.h"
#include "apicompat/semantic_detector.h"
#include "apicompat/signature_diff.h"
#include "apicompat/types.h"
#include "apicompat/util.h"

namespace apicompat::testing {

inline std::filesystem::path source_dir() { return APICOMPAT_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& relative) {
  return source_dir() / "fixtures" / relative;
}

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("apicompat-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline ApiRecord make_record(const std::string& signature, int level, const std::string& body,
                             const std::string& comment = "") {
  ApiRecord r;
  r.signature = normalize_signature(signature);
  r.level = ApiLevel(level);
  r.body = body;
  r.comment = comment;
  return r;
}

/// The record for `signature` at `level` of a scanned corpus.
inline ApiRecord find_record(const extraction::CorpusIndex& corpus, int level,
                             const std::string& signature) {
  const std::string key = normalize_signature(signature).identity_key();
  for (const ApiRecord& r : corpus.facts.at(ApiLevel(level))) {
    if (r.signature.identity_key() == key) return r;
  }
  throw std::runtime_error("no record " + signature + " at " + std::to_string(level));
}

inline const extraction::CorpusIndex& mini_aosp() {
  static const extraction::CorpusIndex corpus =
      extraction::scan_corpus(fixture("mini-aosp"), ApiLevel(4), ApiLevel(33));
  return corpus;
}

/// Signature entries plus baseline semantic entries for every boundary.
inline kb::KnowledgeBase build_kb(const extraction::CorpusIndex& corpus) {
  kb::KnowledgeBase out;
  out.set_corpus_levels(corpus.levels);
  for (std::size_t i = 0; i + 1 < corpus.levels.size(); ++i) {
    const ApiLevel x = corpus.levels[i];
    const ApiLevel x1 = corpus.levels[i + 1];
    const auto diff = sigdiff::diff_levels(x, corpus.facts.at(x), x1, corpus.facts.at(x1));
    out.merge(sigdiff::detect_signature_incompat(diff, "test"));
    std::vector<kb::IncompatibilityEntry> semantic;
    for (const auto& [o, n] : diff.retained_changed) {
      const auto v = semantic::detect_semantic(o, n, {});
      if (!v.labels.empty()) {
        semantic.push_back({v.signature, v.boundary, kb::EntryKind::kSemantic, v.labels, "test"});
      }
    }
    out.merge(semantic);
  }
  return out;
}

}  // namespace apicompat::testing
