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

#include "apicompat/semantic_detector.h"

#include "httplib.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>
#include <sstream>
#include <thread>

#include "apicompat/error.h"
#include "apicompat/json_io.h"
#include "apicompat/util.h"

namespace apicompat::semantic {

namespace detail {
extern const char* const kDemonstrationsJsonl;
}  // namespace detail

namespace {

constexpr std::string_view kTaskIntro =
    "You are reviewing how one Android framework API method changed between two consecutive\n"
    "API levels. Decide whether the change is semantically incompatible for apps that call\n"
    "the method.\n"
    "\n"
    "Incompatibility labels:\n"
    "- Return Value Alteration: for the same inputs the method may now return a different\n"
    "  value, or a value of a different type.\n"
    "- Exception Handling Modification: the method may now throw exceptions it did not throw\n"
    "  before, or no longer throws or handles exceptions it used to.\n"
    "Answer None when the change keeps the observable behaviour.\n";

constexpr std::string_view kChangeTypeList =
    "\n"
    "Code change types:\n"
    "- Return Statement Changed\n"
    "- Exception Handling Statement Changed\n"
    "- Control Dependency Changed\n"
    "- Other Statement Changed\n"
    "- Dependent API Changed\n"
    "- No Change\n";

constexpr std::string_view kCotFormat =
    "\n"
    "Work in two steps. First name every code change type that applies to the change, then\n"
    "give the verdict. End your answer with exactly these two lines:\n"
    "CHANGE_TYPES: [<code change types, comma-separated>]\n"
    "VERDICT: [<labels, comma-separated, or None>]\n";

constexpr std::string_view kDirectFormat =
    "\n"
    "End your answer with exactly this line:\n"
    "VERDICT: [<labels, comma-separated, or None>]\n";

constexpr std::string_view kReminder =
    "\n\nYour previous reply could not be read. Reply again and end with the answer lines in "
    "exactly the format given above.";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Removes the common indentation of the lines after the first, which sit
// at the method's nesting depth in the original file.
std::string dedent_body(std::string_view body) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : body) {
    if (c == '\r') continue;
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c == '\t' ? ' ' : c);
    }
  }
  lines.push_back(std::move(cur));
  for (auto& l : lines) {
    while (!l.empty() && l.back() == ' ') l.pop_back();
  }
  std::size_t common = std::string::npos;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    common = std::min(common, lines[i].find_first_not_of(' '));
  }
  if (common == std::string::npos) common = 0;
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    if (i == 0) {
      out += trim(lines[i]);
    } else if (!lines[i].empty()) {
      out += lines[i].substr(std::min(common, lines[i].size()));
    }
  }
  return trim(out);
}

std::string joined(const std::vector<std::string>& items, std::string_view empty) {
  if (items.empty()) return std::string(empty);
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

void version_block(std::string& out, std::string_view which, const ApiRecord& r,
                   const PromptOptions& options) {
  out += which;
  out += " version (API level " + std::to_string(r.level.value()) + ")\n";
  out += "Signature: " + render_signature(r.signature) + "\n";
  out += "Annotations: " + joined(r.annotations, "(none)") + "\n";
  if (options.include_comments) {
    const std::string c = trim(r.comment);
    out += "Comment:\n" + (c.empty() ? std::string("(none)") : c) + "\n";
  }
  out += "Body:\n" + dedent_body(r.body) + "\n";
  if (options.include_ast) out += "AST:\n" + changes::to_ast_text(r.body) + "\n";
}

std::string answer_lines(const ChangeTypeSet& types, const LabelSet& labels, bool cot) {
  std::string out;
  if (cot) out += "CHANGE_TYPES: [" + joined(change_type_names(types), "None") + "]\n";
  out += "VERDICT: [" + joined(label_names(labels), "None") + "]\n";
  return out;
}

std::vector<std::string> split_items(std::string_view inside) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= inside.size()) {
    std::size_t end = inside.find(',', start);
    if (end == std::string_view::npos) end = inside.size();
    std::string item = trim(inside.substr(start, end - start));
    while (!item.empty() && (item.front() == '"' || item.front() == '\'')) item.erase(0, 1);
    while (!item.empty() && (item.back() == '"' || item.back() == '\'')) item.pop_back();
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

bool is_none(const std::vector<std::string>& items) {
  if (items.empty()) return true;
  if (items.size() != 1) return false;
  std::string lower = items[0];
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "none";
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::regex answer_regex(std::string_view name) {
  return std::regex("[\\s>*#_`-]*" + std::string(name) +
                        "[*_`]*\\s*:[*_`]*\\s*\\[([^\\]]*)\\][*_`.]*\\s*",
                    std::regex::icase);
}

// Last `NAME: [ ... ]` line, allowing markdown decoration around it.
std::optional<std::string> last_answer_line(std::string_view text, std::string_view name) {
  const std::regex re = answer_regex(name);
  std::optional<std::string> found;
  for (std::string_view line : lines_of(text)) {
    const std::string s(line);
    std::smatch m;
    if (std::regex_match(s, m, re)) found = m[1].str();
  }
  return found;
}

// Prose preceding the first answer line.
std::string rationale_of(std::string_view response) {
  const std::regex types = answer_regex("CHANGE_TYPES");
  const std::regex verdict = answer_regex("VERDICT");
  std::string before;
  for (std::string_view line : lines_of(response)) {
    const std::string s(line);
    if (std::regex_match(s, types) || std::regex_match(s, verdict)) break;
    before += s;
    before += '\n';
  }
  before = trim(before);
  constexpr std::size_t kMax = 2000;
  if (before.size() > kMax) before.resize(kMax);
  return before;
}

std::string baseline_rationale(const changes::ChangeReport& report, const LabelSet& labels) {
  std::string out = "rule table: ";
  out += joined(change_type_names(report.change_types), "None");
  out += " -> ";
  out += joined(label_names(labels), "None");
  return out;
}

std::string call_backend(ModelBackend& backend, const DetectorConfig& config,
                         const std::string& prompt) {
  const std::string model = backend.name();
  if (config.cache) {
    if (auto hit = config.cache->get(model, prompt)) return *hit;
  }
  if (config.limiter) config.limiter->acquire();
  std::string response = backend.complete(prompt);
  if (config.cache) config.cache->put(model, prompt, response);
  return response;
}

}  // namespace

BehaviorDelta behavior_delta(const changes::ChangeReport& report, bool return_type_changed) {
  BehaviorDelta d;
  d.return_facet_changed =
      return_type_changed || report.change_types.contains(ChangeType::kReturnStatementChanged);
  d.exception_facet_changed =
      report.change_types.contains(ChangeType::kExceptionHandlingStatementChanged);
  return d;
}

const std::vector<LabeledPair>& default_demonstrations() {
  static const std::vector<LabeledPair> bank = [] {
    std::vector<LabeledPair> out;
    for (const auto& j : io::parse_jsonl(detail::kDemonstrationsJsonl, "demonstrations")) {
      out.push_back(io::labeled_pair_from_json(j));
    }
    return out;
  }();
  return bank;
}

std::vector<LabeledPair> load_demonstrations(const std::filesystem::path& path) {
  std::vector<LabeledPair> out;
  std::size_t n = 0;
  for (const auto& j : io::parse_jsonl(read_file(path), path.string())) {
    ++n;
    try {
      out.push_back(io::labeled_pair_from_json(j));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfiguration,
                  path.string() + ": record " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string build_prompt(const ApiRecord& old_record, const ApiRecord& new_record,
                         const PromptOptions& options,
                         std::span<const LabeledPair> demonstrations) {
  if (!old_record.signature.same_identity(new_record.signature)) {
    throw Error(ErrorCode::kPrecondition, "build_prompt: identity mismatch");
  }
  if (options.shots < 0) throw Error(ErrorCode::kConfiguration, "shots must be >= 0");
  if (static_cast<std::size_t>(options.shots) > demonstrations.size()) {
    throw Error(ErrorCode::kConfiguration,
                "demonstration bank holds " + std::to_string(demonstrations.size()) +
                    " examples, " + std::to_string(options.shots) + " requested");
  }
  std::string out(kTaskIntro);
  if (options.use_cot) {
    out += kChangeTypeList;
    out += kCotFormat;
  } else {
    out += kDirectFormat;
  }
  for (int i = 0; i < options.shots; ++i) {
    const LabeledPair& d = demonstrations[static_cast<std::size_t>(i)];
    out += "\n### Example " + std::to_string(i + 1) + "\n";
    version_block(out, "Earlier", d.old_record, options);
    out += "\n";
    version_block(out, "Later", d.new_record, options);
    out += "\n";
    out += answer_lines(d.gold_change_types, d.gold_labels, options.use_cot);
  }
  out += "\n### Query\n";
  version_block(out, "Earlier", old_record, options);
  out += "\n";
  version_block(out, "Later", new_record, options);
  out += "\n";
  if (options.use_cot) out += "CHANGE_TYPES:\n";
  out += "VERDICT:\n";
  return out;
}

std::string build_prompt(const ApiRecord& old_record, const ApiRecord& new_record,
                         const PromptOptions& options) {
  return build_prompt(old_record, new_record, options, default_demonstrations());
}

ModelAnswer parse_model_output(std::string_view text, bool require_change_types) {
  ModelAnswer answer;
  const auto verdict = last_answer_line(text, "VERDICT");
  if (!verdict) throw Error(ErrorCode::kMalformedOutput, "no 'VERDICT: [...]' line in response");
  const auto types = last_answer_line(text, "CHANGE_TYPES");
  if (!types && require_change_types) {
    throw Error(ErrorCode::kMalformedOutput, "no 'CHANGE_TYPES: [...]' line in response");
  }
  if (types) {
    answer.has_change_types = true;
    const auto items = split_items(*types);
    if (!is_none(items)) {
      for (const auto& name : items) {
        const auto t = parse_change_type(name);
        if (!t) throw Error(ErrorCode::kMalformedOutput, "unknown change type '" + name + "'");
        answer.change_types.insert(*t);
      }
    }
    if (answer.change_types.contains(ChangeType::kNoChange) && answer.change_types.size() > 1) {
      throw Error(ErrorCode::kMalformedOutput, "'No Change' combined with other change types");
    }
  }
  const auto items = split_items(*verdict);
  if (!is_none(items)) {
    for (const auto& name : items) {
      const auto l = parse_label(name);
      if (!l || !kSemanticLabels.contains(*l)) {
        throw Error(ErrorCode::kMalformedOutput, "unknown verdict label '" + name + "'");
      }
      answer.labels.insert(*l);
    }
  }
  return answer;
}

LabelSet baseline_verdict(const ChangeTypeSet& change_types, bool return_type_changed) {
  LabelSet out;
  if (return_type_changed || change_types.contains(ChangeType::kReturnStatementChanged)) {
    out.insert(IncompatLabel::kReturnValueAlteration);
  }
  if (change_types.contains(ChangeType::kExceptionHandlingStatementChanged)) {
    out.insert(IncompatLabel::kExceptionHandlingModification);
  }
  return out;
}

// --- backends ---------------------------------------------------------------

HttpChatBackend::HttpChatBackend(Config config) : config_(std::move(config)) {
  const std::regex re("^(https?://[^/]+)(/.*)?$", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(config_.url, m, re)) {
    throw Error(ErrorCode::kConfiguration, "model URL must be http(s)://host[:port]/path: " +
                                               config_.url);
  }
  scheme_host_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  if (config_.model.empty()) throw Error(ErrorCode::kConfiguration, "model name is empty");
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::string HttpChatBackend::complete(const std::string& prompt) {
  nlohmann::json body = {{"model", config_.model},
                         {"temperature", 0},
                         {"messages", {{{"role", "user"}, {"content", prompt}}}}};
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (const char* token = std::getenv(config_.token_env.c_str()); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.base_delay * (1 << (attempt - 1)));
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "model endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      const auto& text = reply.at(nlohmann::json::json_pointer(config_.response_pointer));
      if (!text.is_string()) throw std::runtime_error("reply text is not a string");
      return text.get<std::string>();
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kBackendUnavailable,
                  std::string("cannot read reply at ") + config_.response_pointer + ": " + e.what());
    }
  }
  throw Error(ErrorCode::kBackendUnavailable,
              "model endpoint unavailable after " + std::to_string(config_.max_attempts) +
                  " attempts: " + last_error);
}

StubBackend::StubBackend(std::filesystem::path dir, std::string model)
    : dir_(std::move(dir)), model_(std::move(model)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kConfiguration, "stub directory not found: " + dir_.string());
  }
}

std::string StubBackend::complete(const std::string& prompt) {
  const auto path = dir_ / (sha256_hex(prompt) + ".txt");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kBackendUnavailable, "no canned response " + path.string());
  }
  return read_file(path);
}

ScriptedBackend::ScriptedBackend(Script script, std::string model)
    : script_(std::move(script)), model_(std::move(model)) {}

std::string ScriptedBackend::complete(const std::string& prompt) {
  int index = 0;
  {
    std::lock_guard lock(mu_);
    index = calls_++;
  }
  return script_(prompt, index);
}

int ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

ResponseCache::ResponseCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

std::string ResponseCache::key(const std::string& model, const std::string& prompt) {
  return sha256_hex(model + "\n" + prompt);
}

std::optional<std::string> ResponseCache::get(const std::string& model,
                                              const std::string& prompt) const {
  const std::string k = key(model, prompt);
  {
    std::shared_lock lock(mu_);
    if (auto it = entries_.find(k); it != entries_.end()) return it->second;
  }
  if (dir_) {
    const auto path = *dir_ / (k + ".txt");
    if (std::filesystem::exists(path)) return read_file(path);
  }
  return std::nullopt;
}

void ResponseCache::put(const std::string& model, const std::string& prompt,
                        const std::string& response) {
  const std::string k = key(model, prompt);
  std::unique_lock lock(mu_);
  entries_[k] = response;
  if (dir_) write_file(*dir_ / (k + ".txt"), response);
}

RateLimiter::RateLimiter(double requests_per_second)
    : spacing_(requests_per_second > 0
                   ? std::chrono::nanoseconds(static_cast<long long>(1e9 / requests_per_second))
                   : std::chrono::nanoseconds(0)),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (spacing_.count() == 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + spacing_;
  }
  std::this_thread::sleep_until(slot);
}

// --- detection ---------------------------------------------------------------

SemanticVerdict detect_semantic(const ApiRecord& old_record, const ApiRecord& new_record,
                                const DetectorConfig& config) {
  const changes::ChangeReport report = changes::classify_change(old_record, new_record);
  const bool return_type_changed =
      old_record.signature.return_type != new_record.signature.return_type;

  SemanticVerdict v;
  v.signature = new_record.signature;
  v.boundary = report.boundary;
  v.source = config.backend ? "model:" + config.backend->name() : "baseline";

  if (report.change_types.contains(ChangeType::kNoChange)) {
    v.change_types = report.change_types;
    v.rationale = "no code change";
    return v;
  }
  if (!config.backend) {
    v.change_types = report.change_types;
    v.labels = baseline_verdict(report.change_types, return_type_changed);
    v.rationale = baseline_rationale(report, v.labels);
    return v;
  }

  const auto& bank = config.demonstrations.empty() ? default_demonstrations()
                                                   : config.demonstrations;
  const std::string prompt = build_prompt(old_record, new_record, config.prompt, bank);
  std::string response = call_backend(*config.backend, config, prompt);
  std::optional<ModelAnswer> answer;
  try {
    answer = parse_model_output(response, config.prompt.use_cot);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMalformedOutput) throw;
    response = call_backend(*config.backend, config, prompt + std::string(kReminder));
    try {
      answer = parse_model_output(response, config.prompt.use_cot);
    } catch (const Error& again) {
      if (again.code() != ErrorCode::kMalformedOutput) throw;
    }
  }
  if (!answer) {
    v.change_types = report.change_types;
    v.rationale = std::string(kUnparseableRationale);
    v.failed = true;
    return v;
  }
  v.labels = answer->labels;
  v.change_types = answer->has_change_types && !answer->change_types.empty()
                       ? answer->change_types
                       : report.change_types;
  v.rationale = rationale_of(response);
  return v;
}

std::vector<SemanticVerdict> detect_all(
    std::span<const std::pair<ApiRecord, ApiRecord>> pairs, const DetectorConfig& config) {
  DetectorConfig cfg = config;
  if (!cfg.limiter && cfg.requests_per_second > 0) {
    cfg.limiter = std::make_shared<RateLimiter>(cfg.requests_per_second);
  }
  std::vector<SemanticVerdict> out(pairs.size());
  parallel_for(pairs.size(), cfg.backend ? cfg.concurrency : 1, [&](std::size_t i) {
    if (cancel_flag().load()) throw Error(ErrorCode::kInput, "interrupted");
    try {
      out[i] = detect_semantic(pairs[i].first, pairs[i].second, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBackendUnavailable) throw;
      // One unreachable request fails its item, not the batch.
      SemanticVerdict& v = out[i];
      v.signature = pairs[i].second.signature;
      v.boundary = {pairs[i].first.level, pairs[i].second.level};
      v.change_types = changes::classify_change(pairs[i].first, pairs[i].second).change_types;
      v.source = "model:" + cfg.backend->name();
      v.rationale = std::string("backend-unavailable: ") + e.what();
      v.failed = true;
    }
  });
  return out;
}

}  // namespace apicompat::semantic
