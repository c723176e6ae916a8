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

// Semantic incompatibility verdicts for retained-changed method pairs: a
// few-shot prompt for a chat-completion model, the answer grammar, and a
// deterministic rule-table baseline.

#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apicompat/change_classifier.h"
#include "apicompat/types.h"

namespace apicompat::semantic {

struct BehaviorDelta {
  bool return_facet_changed = false;
  bool exception_facet_changed = false;
  bool signature_changed = false;  // always false for same-identity pairs
};

BehaviorDelta behavior_delta(const changes::ChangeReport& report, bool return_type_changed);

struct PromptOptions {
  bool include_comments = false;
  bool include_ast = false;
  bool use_cot = true;
  int shots = 3;
};

struct SemanticVerdict {
  ApiSignature signature;
  Boundary boundary;
  LabelSet labels;  // empty: compatible
  ChangeTypeSet change_types;
  std::string rationale;
  std::string source;  // "baseline" or "model:<name>"
  bool failed = false;  // model output unparseable after the re-ask
};

inline constexpr std::string_view kUnparseableRationale = "model-output-unparseable";

/// The shipped demonstration bank: one return-value alteration, one
/// exception-handling modification and one compatible pair.
const std::vector<LabeledPair>& default_demonstrations();

/// Demonstrations in the benchmark line format.
std::vector<LabeledPair> load_demonstrations(const std::filesystem::path& path);

/// Task description, `options.shots` worked examples, then the query pair
/// with blank answer lines. Throws Error(kConfiguration) if the bank is too
/// small or shots is negative.
std::string build_prompt(const ApiRecord& old_record, const ApiRecord& new_record,
                         const PromptOptions& options,
                         std::span<const LabeledPair> demonstrations);
std::string build_prompt(const ApiRecord& old_record, const ApiRecord& new_record,
                         const PromptOptions& options);

struct ModelAnswer {
  ChangeTypeSet change_types;
  LabelSet labels;
  bool has_change_types = false;
};

/// Reads the last `CHANGE_TYPES: [...]` and `VERDICT: [...]` lines of a
/// response (case-insensitive, surrounding prose ignored). The CHANGE_TYPES
/// line is optional only when `require_change_types` is false. Throws
/// Error(kMalformedOutput).
ModelAnswer parse_model_output(std::string_view text, bool require_change_types = true);

/// Rule table: a changed return statement or return type implies Return
/// Value Alteration, a changed exception-handling statement implies
/// Exception Handling Modification, anything else alone is compatible.
LabelSet baseline_verdict(const ChangeTypeSet& change_types, bool return_type_changed);

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::string name() const = 0;
  /// Returns the assistant text. Throws Error(kBackendUnavailable).
  virtual std::string complete(const std::string& prompt) = 0;
};

/// POSTs {model, temperature: 0, messages: [{role: "user", content}]} and
/// reads the reply at a JSON pointer. Transport failures and 429/5xx
/// statuses are retried with exponential backoff.
class HttpChatBackend : public ModelBackend {
 public:
  struct Config {
    std::string url;  // http(s)://host[:port]/path
    std::string model;
    std::string response_pointer = "/choices/0/message/content";
    std::string token_env = "APICOMPAT_API_TOKEN";
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{500};
    std::chrono::seconds timeout{120};
  };

  explicit HttpChatBackend(Config config);
  std::string name() const override { return config_.model; }
  std::string complete(const std::string& prompt) override;

 private:
  Config config_;
  std::string scheme_host_;
  std::string path_;
};

/// Canned responses from `<dir>/<sha256(prompt)>.txt`.
class StubBackend : public ModelBackend {
 public:
  explicit StubBackend(std::filesystem::path dir, std::string model = "stub");
  std::string name() const override { return model_; }
  std::string complete(const std::string& prompt) override;

 private:
  std::filesystem::path dir_;
  std::string model_;
};

/// Test double: answers by calling `script` and counts requests.
class ScriptedBackend : public ModelBackend {
 public:
  using Script = std::function<std::string(const std::string& prompt, int call_index)>;
  explicit ScriptedBackend(Script script, std::string model = "scripted");
  std::string name() const override { return model_; }
  std::string complete(const std::string& prompt) override;
  int calls() const;

 private:
  Script script_;
  std::string model_;
  mutable std::mutex mu_;
  int calls_ = 0;
};

/// Content-addressed response cache keyed by sha256(model + "\n" + prompt).
/// Optional directory persistence makes runs replayable.
class ResponseCache {
 public:
  explicit ResponseCache(std::optional<std::filesystem::path> dir = std::nullopt);
  std::optional<std::string> get(const std::string& model, const std::string& prompt) const;
  void put(const std::string& model, const std::string& prompt, const std::string& response);
  static std::string key(const std::string& model, const std::string& prompt);

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> entries_;
};

/// Minimum spacing between backend requests shared by all workers.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  std::chrono::nanoseconds spacing_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_;
};

struct DetectorConfig {
  PromptOptions prompt;
  std::shared_ptr<ModelBackend> backend;  // null: rule-table baseline
  std::shared_ptr<ResponseCache> cache;
  std::vector<LabeledPair> demonstrations;  // empty: default bank
  int concurrency = 1;
  double requests_per_second = 0;  // 0: unlimited
  std::shared_ptr<RateLimiter> limiter;  // created from requests_per_second if null
};

/// One verdict. Pairs whose bodies are token-identical with equal return
/// types never reach the backend.
SemanticVerdict detect_semantic(const ApiRecord& old_record, const ApiRecord& new_record,
                                const DetectorConfig& config);

/// Verdicts in input order, with up to config.concurrency requests in flight.
std::vector<SemanticVerdict> detect_all(
    std::span<const std::pair<ApiRecord, ApiRecord>> pairs, const DetectorConfig& config);

}  // namespace apicompat::semantic
