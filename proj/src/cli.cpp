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

#include "apicompat/cli.h"

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "apicompat/app_checker.h"
#include "apicompat/change_classifier.h"
#include "apicompat/error.h"
#include "apicompat/eval.h"
#include "apicompat/extraction.h"
#include "apicompat/json_io.h"
#include "apicompat/knowledge_base.h"
#include "apicompat/semantic_detector.h"
#include "apicompat/signature_diff.h"
#include "apicompat/util.h"

namespace apicompat::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

const std::vector<std::string> kCommands = {"extract",   "diff",      "classify",
                                            "detect",    "kb-export", "check-app",
                                            "eval",      "stats",     "pipeline"};

struct Options {
  std::string command;
  std::string corpus;
  std::string levels = "4:33";
  std::string out;
  std::string backend = "baseline";
  std::string model = "gpt-4";
  std::string model_url;
  std::string response_path = "/choices/0/message/content";
  std::string stub_dir;
  std::string cache_dir;
  std::string demos;
  bool include_comments = false;
  bool include_ast = false;
  bool no_cot = false;
  int shots = 3;
  bool public_only = false;
  int jobs = 4;
  double requests_per_second = 0;
  bool corpus_assisted = false;
  bool save_prompts = false;
  std::string app;
  std::string kb;
  std::string assume_sdk_range;
  bool allow_missing_manifest = false;
  std::string benchmark;
  std::string annotations;
  std::string distance = "jaccard";
  std::string config;
};

void build_app(CLI::App& app, Options& o) {
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("command", o.command, "Subcommand to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--corpus", o.corpus, "Corpus root holding one directory per API level");
  app.add_option("--levels", o.levels, "Level range MIN:MAX to scan")->capture_default_str();
  app.add_option("--out", o.out, "Run directory for all outputs");
  app.add_option("--backend", o.backend, "Semantic detector backend")
      ->check(CLI::IsMember({"baseline", "http", "stub"}))
      ->capture_default_str();
  app.add_option("--model", o.model, "Model name sent to the backend")->capture_default_str();
  app.add_option("--model-url", o.model_url, "Chat-completion endpoint for --backend http");
  app.add_option("--response-path", o.response_path, "JSON pointer to the reply text")
      ->capture_default_str();
  app.add_option("--stub-dir", o.stub_dir, "Canned responses for --backend stub");
  app.add_option("--cache-dir", o.cache_dir, "Persistent model response cache");
  app.add_option("--demos", o.demos, "Demonstration bank replacing the built-in one");
  app.add_flag("--include-comments", o.include_comments, "Show doc comments in prompts");
  app.add_flag("--include-ast", o.include_ast, "Show AST renderings in prompts");
  app.add_flag("--no-cot", o.no_cot, "Ask for the verdict without the change-type step");
  app.add_option("--shots", o.shots, "Number of worked examples in prompts")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_flag("--public-only", o.public_only, "Drop non-public methods during extraction");
  app.add_option("--jobs", o.jobs, "Concurrency bound")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--requests-per-second", o.requests_per_second,
                 "Model request rate limit (0: unlimited)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--corpus-assisted", o.corpus_assisted,
               "Also flag calls to APIs added or removed at the same boundary");
  app.add_flag("--save-prompts", o.save_prompts, "Write each prompt under <out>/prompts");
  app.add_option("--app", o.app, "Application source root for check-app");
  app.add_option("--kb", o.kb, "Knowledge base directory (journal or exports)");
  app.add_option("--assume-sdk-range", o.assume_sdk_range,
                 "MIN:MAX used instead of the manifest range");
  app.add_flag("--allow-missing-manifest", o.allow_missing_manifest,
               "Assume 1:MAX when the app has no manifest");
  app.add_option("--benchmark", o.benchmark, "Labeled pairs for eval");
  app.add_option("--annotations", o.annotations, "Per-annotator labels for agreement");
  app.add_option("--distance", o.distance, "Agreement distance")
      ->check(CLI::IsMember({"jaccard", "nominal"}))
      ->capture_default_str();
  app.add_option("--config", o.config, "key = value file supplying defaults for any flag");
}

std::string app_description() {
  return "apicompat: mine API incompatibilities across framework levels and check apps.\n\n"
         "Commands:\n"
         "  extract     scan the corpus into method facts\n"
         "  diff        signature additions and removals per boundary\n"
         "  classify    change types of retained, changed methods\n"
         "  detect      semantic verdicts (baseline, http or stub backend)\n"
         "  kb-export   write the lifetime and semantic lists from the journal\n"
         "  check-app   flag unguarded call sites in an application\n"
         "  eval        score verdicts against a benchmark; annotator agreement\n"
         "  stats       per-boundary counts\n"
         "  pipeline    extract, diff, classify, detect, kb-export and stats\n\n"
         "Precedence: flags > APICOMPAT_<FLAG> environment variables > --config file.\n"
         "The http backend reads its bearer token from APICOMPAT_API_TOKEN.\n"
         "Exit codes: 0 ok, 1 error, 2 partial failure, 64 usage, 130 interrupted.";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::set<std::string> known_keys(const CLI::App& app) {
  std::set<std::string> keys;
  for (const CLI::Option* opt : app.get_options()) {
    for (const auto& name : opt->get_lnames()) keys.insert(name);
  }
  keys.erase("help");
  return keys;
}

// `key = value` lines; '#' starts a comment line.
std::vector<std::string> config_args(const fs::path& path, const std::set<std::string>& keys) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kConfiguration, "config file not found: " + path.string());
  }
  std::vector<std::string> args;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string key = trim(t.substr(0, eq));
    if (eq == std::string::npos || !keys.contains(key) || key == "config") {
      throw Error(ErrorCode::kConfiguration, path.string() + ":" + std::to_string(line_no) +
                                                 ": expected '<flag> = <value>', got '" + t + "'");
    }
    args.push_back("--" + key + "=" + trim(t.substr(eq + 1)));
  }
  return args;
}

std::string env_name(const std::string& key) {
  std::string name = "APICOMPAT_";
  for (char c : key) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

std::optional<std::string> lookup_env(const Environment* env, const std::string& name) {
  if (env) {
    const auto it = env->find(name);
    return it == env->end() ? std::nullopt : std::optional<std::string>(it->second);
  }
  const char* v = std::getenv(name.c_str());
  return v ? std::optional<std::string>(v) : std::nullopt;
}

std::pair<ApiLevel, ApiLevel> parse_levels(const std::string& text) {
  try {
    const auto r = appcheck::parse_sdk_range(text);
    return {r.min_level, r.max_level};
  } catch (const Error&) {
    throw Error(ErrorCode::kValidation, "--levels must be MIN:MAX with 1 <= MIN <= MAX, got '" +
                                            text + "'");
  }
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void on_sigint(int) { cancel_flag().store(true); }

void check_cancelled() {
  if (cancel_flag().load()) throw Error(ErrorCode::kInput, "interrupted");
}

// One invocation: resolved options, its run directory and what it wrote.
class Run {
 public:
  Run(std::string command, Options options, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), o_(std::move(options)), out_(out), err_(err) {}

  int execute();

 private:
  // --- stages ---
  const extraction::CorpusIndex& corpus();
  const std::vector<sigdiff::SignatureDiff>& diffs();
  std::vector<changes::ChangeReport> classify();
  std::vector<semantic::SemanticVerdict> detect();
  kb::KnowledgeBase load_kb(const fs::path& dir) const;

  void stage_extract();
  void stage_diff();
  void stage_classify();
  void stage_detect();
  void stage_kb_export();
  void stage_stats();
  void stage_check_app();
  void stage_eval();

  semantic::DetectorConfig detector_config() const;
  json config_json() const;
  std::string provenance(std::string_view stage) const;

  fs::path out_dir() const;
  fs::path kb_dir() const { return o_.kb.empty() ? out_dir() / "kb" : fs::path(o_.kb); }
  void emit(const std::string& relative, std::string_view content);
  void journal(const kb::KnowledgeBase& kb);
  void write_manifest();

  std::string command_;
  Options o_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<extraction::CorpusIndex> corpus_;
  std::optional<std::vector<sigdiff::SignatureDiff>> diffs_;
  std::optional<std::vector<changes::ChangeReport>> reports_;
  std::map<std::string, std::string> outputs_;  // relative path -> sha256
  std::vector<json> extra_inputs_;
  bool partial_ = false;
  std::string run_id_;
};

fs::path Run::out_dir() const {
  if (o_.out.empty()) throw Error(ErrorCode::kConfiguration, command_ + " needs --out");
  return o_.out;
}

void Run::emit(const std::string& relative, std::string_view content) {
  write_file(out_dir() / relative, content);
  outputs_[relative] = sha256_hex(content);
}

json Run::config_json() const {
  // Output locations are left out so that identical inputs give identical runs.
  json c;
  c["corpus"] = o_.corpus;
  c["levels"] = o_.levels;
  c["backend"] = o_.backend;
  if (o_.backend != "baseline") {
    c["model"] = o_.model;
    c["model_url"] = o_.model_url;
    c["response_path"] = o_.response_path;
  }
  c["include_comments"] = o_.include_comments;
  c["include_ast"] = o_.include_ast;
  c["cot"] = !o_.no_cot;
  c["shots"] = o_.shots;
  c["demos"] = o_.demos;
  c["public_only"] = o_.public_only;
  c["corpus_assisted"] = o_.corpus_assisted;
  c["app"] = o_.app;
  c["assume_sdk_range"] = o_.assume_sdk_range;
  c["benchmark"] = o_.benchmark;
  c["annotations"] = o_.annotations;
  c["distance"] = o_.distance;
  return c;
}

std::string Run::provenance(std::string_view stage) const {
  return std::string(stage) + "@" + run_id_.substr(0, 12);
}

const extraction::CorpusIndex& Run::corpus() {
  if (!corpus_) {
    if (o_.corpus.empty()) throw Error(ErrorCode::kConfiguration, command_ + " needs --corpus");
    const auto [lo, hi] = parse_levels(o_.levels);
    extraction::ScanOptions scan;
    scan.public_only = o_.public_only;
    scan.jobs = o_.jobs;
    corpus_ = extraction::scan_corpus(o_.corpus, lo, hi, scan);
    for (const auto& s : corpus_->report.skipped) err_ << "warning: skipped " << s.path << ": " << s.reason << "\n";
    // Run identity: configuration plus the digest of every input file.
    std::string material = config_json().dump();
    for (const auto& d : corpus_->report.inputs) material += "\n" + d.path + " " + d.sha256;
    run_id_ = sha256_hex(material);
  }
  return *corpus_;
}

const std::vector<sigdiff::SignatureDiff>& Run::diffs() {
  if (!diffs_) {
    const auto& c = corpus();
    diffs_.emplace();
    for (std::size_t i = 0; i + 1 < c.levels.size(); ++i) {
      const ApiLevel x = c.levels[i];
      const ApiLevel x1 = c.levels[i + 1];
      diffs_->push_back(sigdiff::diff_levels(x, c.facts.at(x), x1, c.facts.at(x1)));
    }
  }
  return *diffs_;
}

std::vector<changes::ChangeReport> Run::classify() {
  if (!reports_) {
    reports_.emplace();
    for (const auto& d : diffs()) {
      std::vector<ApiSignature> changed = d.added;
      changed.insert(changed.end(), d.removed.begin(), d.removed.end());
      for (const auto& [old_record, new_record] : d.retained_changed) {
        check_cancelled();
        auto report = changes::classify_change(old_record, new_record);
        if (o_.corpus_assisted) changes::apply_corpus_dependencies(report, new_record, changed);
        reports_->push_back(std::move(report));
      }
    }
  }
  return *reports_;
}

semantic::DetectorConfig Run::detector_config() const {
  semantic::DetectorConfig cfg;
  cfg.prompt.include_comments = o_.include_comments;
  cfg.prompt.include_ast = o_.include_ast;
  cfg.prompt.use_cot = !o_.no_cot;
  cfg.prompt.shots = o_.shots;
  cfg.concurrency = o_.jobs;
  cfg.requests_per_second = o_.requests_per_second;
  if (!o_.demos.empty()) cfg.demonstrations = semantic::load_demonstrations(o_.demos);
  if (o_.backend == "http") {
    if (o_.model_url.empty()) throw Error(ErrorCode::kConfiguration, "--backend http needs --model-url");
    semantic::HttpChatBackend::Config hc;
    hc.url = o_.model_url;
    hc.model = o_.model;
    hc.response_pointer = o_.response_path;
    cfg.backend = std::make_shared<semantic::HttpChatBackend>(hc);
  } else if (o_.backend == "stub") {
    if (o_.stub_dir.empty()) throw Error(ErrorCode::kConfiguration, "--backend stub needs --stub-dir");
    cfg.backend = std::make_shared<semantic::StubBackend>(o_.stub_dir, o_.model);
  }
  if (cfg.backend) {
    cfg.cache = std::make_shared<semantic::ResponseCache>(
        o_.cache_dir.empty() ? std::nullopt : std::optional<fs::path>(o_.cache_dir));
  }
  // Surface prompt configuration errors before any work is done.
  if (cfg.prompt.shots > static_cast<int>((cfg.demonstrations.empty()
                                               ? semantic::default_demonstrations()
                                               : cfg.demonstrations)
                                              .size())) {
    throw Error(ErrorCode::kConfiguration,
                "--shots " + std::to_string(cfg.prompt.shots) + " exceeds the demonstration bank");
  }
  return cfg;
}

std::vector<semantic::SemanticVerdict> Run::detect() {
  const auto cfg = detector_config();
  std::vector<std::pair<ApiRecord, ApiRecord>> pairs;
  for (const auto& d : diffs()) {
    pairs.insert(pairs.end(), d.retained_changed.begin(), d.retained_changed.end());
  }
  if (o_.save_prompts && cfg.backend) {
    const auto& bank = cfg.demonstrations.empty() ? semantic::default_demonstrations()
                                                  : cfg.demonstrations;
    for (const auto& [a, b] : pairs) {
      if (changes::classify_change(a, b).change_types.contains(ChangeType::kNoChange)) continue;
      const std::string prompt = semantic::build_prompt(a, b, cfg.prompt, bank);
      emit("prompts/" + sha256_hex(prompt) + ".txt", prompt);
    }
  }
  return semantic::detect_all(pairs, cfg);
}

kb::KnowledgeBase Run::load_kb(const fs::path& dir) const {
  if (fs::is_regular_file(dir / "journal.jsonl")) {
    kb::KnowledgeBase kb = kb::load_journal(dir / "journal.jsonl");
    if (fs::is_regular_file(dir / "levels.txt")) {
      std::vector<ApiLevel> levels;
      std::istringstream in(read_file(dir / "levels.txt"));
      std::string tok;
      while (std::getline(in, tok, ',')) {
        if (!trim(tok).empty()) levels.emplace_back(std::stoi(trim(tok)));
      }
      kb.set_corpus_levels(std::move(levels));
    }
    return kb;
  }
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kInput, "knowledge base not found: " + dir.string());
  return kb::import_directory(dir);
}

void Run::journal(const kb::KnowledgeBase& kb) {
  const fs::path dir = out_dir() / "kb";
  kb::append_journal(dir / "journal.jsonl", kb);
  outputs_["kb/journal.jsonl"] = sha256_hex(read_file(dir / "journal.jsonl"));
  std::string levels;
  for (const auto& l : kb.corpus_levels()) {
    if (!levels.empty()) levels += ',';
    levels += std::to_string(l.value());
  }
  emit("kb/levels.txt", levels + "\n");
}

void Run::stage_extract() {
  const auto& c = corpus();
  std::vector<json> rows;
  for (const auto& [level, records] : c.facts) {
    for (const auto& r : records) rows.push_back(io::record_to_json(r));
  }
  emit("facts.jsonl", io::to_jsonl(rows));
  json report;
  std::vector<int> levels;
  for (const auto& l : c.levels) levels.push_back(l.value());
  report["levels"] = levels;
  report["records"] = c.record_count();
  report["missing_levels"] = c.report.missing_levels;
  report["non_source_files"] = c.report.non_source_files;
  report["duplicate_records"] = c.report.duplicate_records;
  report["private_records"] = c.report.private_records;
  report["skipped"] = json::array();
  for (const auto& s : c.report.skipped) report["skipped"].push_back({{"path", s.path}, {"reason", s.reason}});
  emit("scan_report.json", io::pretty(report));
  out_ << "extract: " << c.record_count() << " records across " << c.levels.size()
       << " levels (" << c.report.skipped.size() << " files skipped)\n";
  if (!c.report.skipped.empty()) partial_ = true;
}

void Run::stage_diff() {
  std::vector<json> rows;
  kb::KnowledgeBase kb;
  kb.set_corpus_levels(corpus().levels);
  std::size_t added = 0, removed = 0;
  for (const auto& d : diffs()) {
    json row;
    row["boundary"] = io::boundary_to_json(d.boundary());
    row["added"] = json::array();
    row["removed"] = json::array();
    row["retained_changed"] = json::array();
    for (const auto& s : d.added) row["added"].push_back(render_signature(s));
    for (const auto& s : d.removed) row["removed"].push_back(render_signature(s));
    for (const auto& p : d.retained_changed) row["retained_changed"].push_back(render_signature(p.second.signature));
    row["retained_identical"] = d.retained_identical;
    rows.push_back(std::move(row));
    const auto entries = sigdiff::detect_signature_incompat(d, provenance("signature-diff"));
    kb.merge(entries);
    added += d.added.size();
    removed += d.removed.size();
  }
  emit("diff.jsonl", io::to_jsonl(rows));
  journal(kb);
  out_ << "diff: " << diffs().size() << " boundaries, " << added << " added, " << removed
       << " removed\n";
}

void Run::stage_classify() {
  std::vector<json> rows;
  for (const auto& r : classify()) rows.push_back(io::change_report_to_json(r));
  emit("changes.jsonl", io::to_jsonl(rows));
  out_ << "classify: " << rows.size() << " changed pairs\n";
}

void Run::stage_detect() {
  kb::KnowledgeBase kb;
  kb.set_corpus_levels(corpus().levels);
  const std::vector<semantic::SemanticVerdict> verdicts = detect();
  std::vector<json> rows, failures;
  int incompatible = 0;
  for (const auto& v : verdicts) {
    json row;
    row["signature"] = render_signature(v.signature);
    row["boundary"] = io::boundary_to_json(v.boundary);
    row["labels"] = label_names(v.labels);
    row["change_types"] = change_type_names(v.change_types);
    row["source"] = v.source;
    row["rationale"] = v.rationale;
    row["failed"] = v.failed;
    rows.push_back(row);
    if (v.failed) {
      failures.push_back({{"signature", row["signature"]},
                          {"boundary", row["boundary"]},
                          {"reason", v.rationale}});
      continue;
    }
    if (v.labels.empty()) continue;
    ++incompatible;
    const kb::IncompatibilityEntry e{v.signature, v.boundary, kb::EntryKind::kSemantic, v.labels,
                                     provenance(v.source)};
    kb.merge(std::span(&e, 1));
  }
  emit("verdicts.jsonl", io::to_jsonl(rows));
  emit("failures.jsonl", io::to_jsonl(failures));
  journal(kb);
  if (!failures.empty()) partial_ = true;
  out_ << "detect: " << verdicts.size() << " pairs, " << incompatible << " incompatible, "
       << failures.size() << " failed\n";
}

void Run::stage_kb_export() {
  const kb::KnowledgeBase kb = load_kb(kb_dir());
  emit("kb/android_api_lifetime.txt", kb::export_cid_lifetime(kb));
  emit("kb/android_api_semantic.txt", kb::export_semantic_list(kb));
  out_ << "kb-export: " << kb.size() << " entries\n";
}

void Run::stage_stats() {
  const kb::KnowledgeBase kb = load_kb(kb_dir());
  std::vector<changes::ChangeReport> reports;
  if (reports_) {
    reports = *reports_;
  } else if (fs::is_regular_file(out_dir() / "changes.jsonl")) {
    for (const auto& j : io::parse_jsonl(read_file(out_dir() / "changes.jsonl"), "changes.jsonl")) {
      reports.push_back(io::change_report_from_json(j));
    }
  }
  const auto rows = kb::stats(kb, reports);
  const std::string csv = kb::stats_csv(rows);
  emit("stats.csv", csv);
  out_ << csv;
}

void Run::stage_check_app() {
  if (o_.app.empty()) throw Error(ErrorCode::kConfiguration, "check-app needs --app");
  if (o_.kb.empty()) throw Error(ErrorCode::kConfiguration, "check-app needs --kb");
  const kb::KnowledgeBase kb = load_kb(o_.kb);
  appcheck::CheckOptions options;
  if (!o_.assume_sdk_range.empty()) options.assume_range = appcheck::parse_sdk_range(o_.assume_sdk_range);
  options.allow_missing_manifest = o_.allow_missing_manifest;
  options.jobs = o_.jobs;
  const auto report = appcheck::check_app(o_.app, kb, options);
  if (!o_.out.empty()) emit("issues.jsonl", appcheck::issues_jsonl(report));
  out_ << appcheck::summary_table(report);
  if (!report.skipped.empty()) partial_ = true;
}

void Run::stage_eval() {
  if (o_.benchmark.empty() && o_.annotations.empty()) {
    throw Error(ErrorCode::kConfiguration, "eval needs --benchmark and/or --annotations");
  }
  json result;
  auto scores = [](const eval::Metrics& m) {
    json j;
    for (const auto& [label, s] : m.per_label) {
      j["per_label"][label] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                               {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}, {"support", s.support}};
    }
    j["macro"] = {{"precision", m.macro_precision}, {"recall", m.macro_recall}, {"f1", m.macro_f1}};
    j["micro"] = {{"precision", m.micro_precision}, {"recall", m.micro_recall}, {"f1", m.micro_f1}};
    return j;
  };
  std::ostringstream text;
  text << std::fixed << std::setprecision(3);
  if (!o_.benchmark.empty()) {
    const auto bench = eval::load_benchmark(o_.benchmark);
    for (const auto& w : bench.warnings) err_ << "warning: " << w << "\n";
    extra_inputs_.push_back({{"path", o_.benchmark}, {"sha256", sha256_hex(read_file(o_.benchmark))}});
    const auto ev = eval::evaluate(bench.pairs, detector_config());
    result["items"] = ev.items;
    result["failures"] = ev.failures;
    result["labels"] = scores(ev.labels);
    result["change_types"] = scores(ev.change_types);
    result["accuracy"] = ev.binary.accuracy;
    result["success_rate"] = ev.binary_defined ? json(ev.binary.success_rate) : json(nullptr);
    text << "items " << ev.items << "  failures " << ev.failures << "\n"
         << "labels        macro P " << ev.labels.macro_precision << "  R "
         << ev.labels.macro_recall << "  F1 " << ev.labels.macro_f1 << "\n"
         << "change types  macro P " << ev.change_types.macro_precision << "  R "
         << ev.change_types.macro_recall << "  F1 " << ev.change_types.macro_f1 << "\n"
         << "accuracy " << ev.binary.accuracy << "  success rate ";
    if (ev.binary_defined) text << ev.binary.success_rate << "\n";
    else text << "undefined\n";
    if (ev.failures > 0) partial_ = true;
  }
  if (!o_.annotations.empty()) {
    const auto matrix = eval::load_annotations(o_.annotations);
    extra_inputs_.push_back({{"path", o_.annotations}, {"sha256", sha256_hex(read_file(o_.annotations))}});
    const double alpha = eval::krippendorff_alpha(matrix, eval::distance_by_name(o_.distance));
    result["alpha"] = {{"value", alpha}, {"distance", o_.distance}, {"items", matrix.size()}};
    text << "krippendorff alpha (" << o_.distance << ") " << alpha << "\n";
  }
  if (!o_.out.empty()) emit("eval.json", io::pretty(result));
  out_ << text.str();
}

void Run::write_manifest() {
  if (o_.out.empty() || outputs_.empty()) return;
  json m;
  m["tool"] = "apicompat";
  m["version"] = kVersion;
  m["command"] = command_;
  m["config"] = config_json();
  m["inputs"] = json::array();
  if (corpus_) {
    for (const auto& d : corpus_->report.inputs) m["inputs"].push_back({{"path", d.path}, {"sha256", d.sha256}});
  }
  for (const auto& x : extra_inputs_) m["inputs"].push_back(x);
  if (run_id_.empty()) run_id_ = sha256_hex(m["config"].dump() + m["inputs"].dump());
  m["outputs"] = outputs_;
  m["run_id"] = run_id_;
  m["generated_at"] = timestamp();
  write_file(out_dir() / "manifest.json", io::pretty(m));
}

int Run::execute() {
  try {
    if (command_ == "extract") {
      stage_extract();
    } else if (command_ == "diff") {
      stage_diff();
    } else if (command_ == "classify") {
      stage_classify();
    } else if (command_ == "detect") {
      stage_detect();
    } else if (command_ == "kb-export") {
      stage_kb_export();
    } else if (command_ == "stats") {
      stage_stats();
    } else if (command_ == "check-app") {
      stage_check_app();
    } else if (command_ == "eval") {
      stage_eval();
    } else {  // pipeline
      out_dir();
      stage_extract();
      check_cancelled();
      stage_diff();
      check_cancelled();
      stage_classify();
      check_cancelled();
      stage_detect();
      check_cancelled();
      o_.kb.clear();
      stage_kb_export();
      stage_stats();
    }
  } catch (const Error&) {
    if (cancel_flag().load()) {
      write_manifest();
      err_ << "interrupted; outputs written so far are kept\n";
      return kExitInterrupted;
    }
    throw;
  }
  write_manifest();
  return partial_ ? kExitPartial : kExitOk;
}

}  // namespace

std::string help_text() {
  Options o;
  CLI::App app(app_description(), "apicompat");
  build_app(app, o);
  return app.help();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment* env) {
  Options o;
  CLI::App app(app_description(), "apicompat");
  build_app(app, o);
  const auto keys = known_keys(app);

  const bool wants_help = std::any_of(args.begin(), args.end(), [](const std::string& a) {
    return a == "--help" || a == "-h";
  });
  if (wants_help) {
    out << app.help();
    return kExitOk;
  }
  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }

  try {
    // Lowest precedence first; TakeLast lets later occurrences win.
    std::vector<std::string> merged;
    std::optional<std::string> config_path = lookup_env(env, env_name("config"));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].starts_with("--config=")) config_path = args[i].substr(9);
    }
    if (config_path) {
      const auto c = config_args(*config_path, keys);
      merged.insert(merged.end(), c.begin(), c.end());
    }
    for (const auto& key : keys) {
      if (key == "config") continue;
      if (const auto v = lookup_env(env, env_name(key))) merged.push_back("--" + key + "=" + *v);
    }
    merged.insert(merged.end(), args.begin(), args.end());

    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      err << "usage error: " << e.what() << "\nrun 'apicompat --help' for the flag list\n";
      return kExitUsage;
    }

    cancel_flag().store(false);
    const auto previous = std::signal(SIGINT, on_sigint);
    int code = kExitOk;
    try {
      Run r(o.command, o, out, err);
      code = r.execute();
    } catch (...) {
      std::signal(SIGINT, previous);
      throw;
    }
    std::signal(SIGINT, previous);
    return code;
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace apicompat::cli
