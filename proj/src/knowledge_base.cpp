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

#include "apicompat/knowledge_base.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "apicompat/error.h"
#include "apicompat/json_io.h"
#include "apicompat/util.h"

namespace apicompat::kb {

namespace {

constexpr std::string_view kLifetimeHeader = "# android_api_lifetime\tlevels=";
constexpr std::string_view kSemanticHeader = "# android_api_semantic\tsignature\tboundary\tlabels";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out = split(text, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return out;
}

int parse_int(std::string_view s, std::string_view what, std::size_t line_no) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::kSchema, std::string(what) + ": line " + std::to_string(line_no) +
                                        ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::string join_levels(const std::vector<ApiLevel>& levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(levels[i].value());
  }
  return out;
}

std::string short_labels(const LabelSet& labels) {
  std::string out;
  for (IncompatLabel l : members(labels)) {
    if (!out.empty()) out += ',';
    out += label_short_name(l);
  }
  return out;
}

// Corpus extent used for lifespan reconstruction. Falls back to the span of
// the recorded boundaries when the corpus levels are unknown.
std::pair<int, int> corpus_extent(const KnowledgeBase& kb,
                                  const std::vector<IncompatibilityEntry>& entries) {
  if (!kb.corpus_levels().empty()) {
    return {kb.corpus_levels().front().value(), kb.corpus_levels().back().value()};
  }
  int lo = 0;
  int hi = 0;
  for (const auto& e : entries) {
    if (lo == 0 || e.boundary.from.value() < lo) lo = e.boundary.from.value();
    hi = std::max(hi, e.boundary.to.value());
  }
  return {lo == 0 ? 1 : lo, std::max(hi, lo == 0 ? 1 : lo)};
}

}  // namespace

std::string_view entry_kind_name(EntryKind k) {
  return k == EntryKind::kSignature ? "signature" : "semantic";
}

void validate_entry(const IncompatibilityEntry& e) {
  const std::string who = render_signature(e.signature) + " at " + boundary_string(e.boundary);
  if (e.labels.empty()) throw Error(ErrorCode::kValidation, "empty label set for " + who);
  if (!(e.boundary.from < e.boundary.to)) {
    throw Error(ErrorCode::kValidation, "boundary must be increasing for " + who);
  }
  if (e.kind == EntryKind::kSignature) {
    if (!kSignatureLabels.includes(e.labels) || e.labels.size() != 1) {
      throw Error(ErrorCode::kValidation,
                  "signature entry needs exactly one of Addition/Removal: " + who);
    }
  } else if (!kSemanticLabels.includes(e.labels)) {
    throw Error(ErrorCode::kValidation,
                "semantic entry labels must be RVA and/or EHM: " + who);
  }
}

bool same_exported_fields(const IncompatibilityEntry& a, const IncompatibilityEntry& b) {
  return a.signature == b.signature && a.boundary == b.boundary && a.kind == b.kind &&
         a.labels == b.labels;
}

std::vector<IncompatibilityEntry> KnowledgeBase::entries() const {
  std::vector<IncompatibilityEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, e] : entries_) out.push_back(e);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const std::string ra = render_signature(a.signature);
    const std::string rb = render_signature(b.signature);
    if (ra != rb) return ra < rb;
    if (a.boundary != b.boundary) return a.boundary < b.boundary;
    return a.kind < b.kind;
  });
  return out;
}

void KnowledgeBase::set_corpus_levels(std::vector<ApiLevel> levels) {
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  corpus_levels_ = std::move(levels);
}

int KnowledgeBase::max_level() const {
  const int last = corpus_levels_.empty() ? 0 : corpus_levels_.back().value();
  return std::max(kDefaultMaxLevel, last);
}

void KnowledgeBase::merge(std::span<const IncompatibilityEntry> entries) {
  for (const auto& e : entries) validate_entry(e);
  for (const auto& e : entries) {
    Key key{e.signature.identity_key(), e.boundary, e.kind};
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(std::move(key), e);
      continue;
    }
    IncompatibilityEntry merged = it->second;
    merged.labels.merge(e.labels);
    validate_entry(merged);
    it->second = std::move(merged);
  }
}

KnowledgeBase merge_entries(KnowledgeBase kb, std::span<const IncompatibilityEntry> entries) {
  kb.merge(entries);
  return kb;
}

std::vector<PresenceInterval> lifespans(const KnowledgeBase& kb) {
  const auto all = kb.entries();
  const auto [lo, hi] = corpus_extent(kb, all);

  std::map<std::string, std::vector<const IncompatibilityEntry*>> by_key;
  for (const auto& e : all) {
    if (e.kind == EntryKind::kSignature) by_key[e.signature.identity_key()].push_back(&e);
  }
  std::vector<PresenceInterval> out;
  for (auto& [key, events] : by_key) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto* a, const auto* b) { return a->boundary < b->boundary; });
    bool present = events.front()->labels.contains(IncompatLabel::kRemoval);
    int start = lo;
    ApiSignature sig = events.front()->signature;
    for (const auto* ev : events) {
      if (ev->labels.contains(IncompatLabel::kAddition)) {
        if (present) out.push_back({sig, start, ev->boundary.from.value()});
        present = true;
        start = ev->boundary.to.value();
        sig = ev->signature;
      } else {
        if (!present) start = lo;  // removal with no recorded presence
        out.push_back({ev->signature, start, ev->boundary.from.value()});
        present = false;
      }
    }
    if (present) out.push_back({sig, start, hi});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const std::string ra = render_signature(a.signature);
    const std::string rb = render_signature(b.signature);
    if (ra != rb) return ra < rb;
    return a.first_level < b.first_level;
  });
  return out;
}

std::string export_cid_lifetime(const KnowledgeBase& kb) {
  std::string out(kLifetimeHeader);
  std::vector<ApiLevel> levels = kb.corpus_levels();
  if (levels.empty()) {
    const auto [lo, hi] = corpus_extent(kb, kb.entries());
    levels = {ApiLevel(lo), ApiLevel(hi)};
  }
  out += join_levels(levels);
  out += '\n';
  for (const auto& iv : lifespans(kb)) {
    out += render_signature(iv.signature);
    out += '\t';
    out += std::to_string(iv.first_level);
    out += '\t';
    out += std::to_string(iv.last_level);
    out += '\n';
  }
  return out;
}

std::string export_semantic_list(const KnowledgeBase& kb) {
  std::string out(kSemanticHeader);
  out += '\n';
  for (const auto& e : kb.entries()) {
    if (e.kind != EntryKind::kSemantic) continue;
    out += render_signature(e.signature);
    out += '\t';
    out += boundary_string(e.boundary);
    out += '\t';
    out += short_labels(e.labels);
    out += '\n';
  }
  return out;
}

KnowledgeBase import_exports(std::string_view lifetime_text, std::string_view semantic_text) {
  KnowledgeBase kb;
  std::vector<IncompatibilityEntry> entries;
  std::vector<ApiLevel> levels;

  std::size_t line_no = 0;
  for (std::string_view line : lines_of(lifetime_text)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with(kLifetimeHeader)) {
      for (std::string_view v : split(line.substr(kLifetimeHeader.size()), ',')) {
        if (!v.empty()) levels.emplace_back(parse_int(v, "lifetime", line_no));
      }
      continue;
    }
    if (line.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 3) {
      throw Error(ErrorCode::kSchema,
                  "lifetime: line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    if (levels.empty()) {
      throw Error(ErrorCode::kSchema, "lifetime: missing corpus-levels header");
    }
    ApiSignature sig = normalize_signature(cols[0]);
    const int first = parse_int(cols[1], "lifetime", line_no);
    const int last = parse_int(cols[2], "lifetime", line_no);
    if (first > last) {
      throw Error(ErrorCode::kSchema,
                  "lifetime: line " + std::to_string(line_no) + ": first level after last level");
    }
    // Neighbouring corpus levels around the interval ends.
    auto prev_level = [&](int v) -> std::optional<int> {
      std::optional<int> best;
      for (ApiLevel l : levels) {
        if (l.value() < v) best = l.value();
      }
      return best;
    };
    auto next_level = [&](int v) -> std::optional<int> {
      for (ApiLevel l : levels) {
        if (l.value() > v) return l.value();
      }
      return std::nullopt;
    };
    if (const auto p = prev_level(first)) {
      entries.push_back({sig, {ApiLevel(*p), ApiLevel(first)}, EntryKind::kSignature,
                         LabelSet{IncompatLabel::kAddition}, "import"});
    }
    if (const auto n = next_level(last)) {
      entries.push_back({sig, {ApiLevel(last), ApiLevel(*n)}, EntryKind::kSignature,
                         LabelSet{IncompatLabel::kRemoval}, "import"});
    }
  }

  line_no = 0;
  for (std::string_view line : lines_of(semantic_text)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    const auto bounds = cols.size() == 3 ? split(cols[1], ':') : std::vector<std::string_view>{};
    if (cols.size() != 3 || bounds.size() != 2) {
      throw Error(ErrorCode::kSchema,
                  "semantic: line " + std::to_string(line_no) + ": expected <sig>\\t<x>:<x1>\\t<labels>");
    }
    LabelSet labels;
    for (std::string_view tok : split(cols[2], ',')) {
      const auto l = parse_label(tok);
      if (!l || !kSemanticLabels.contains(*l)) {
        throw Error(ErrorCode::kSchema, "semantic: line " + std::to_string(line_no) +
                                            ": unknown label '" + std::string(tok) + "'");
      }
      labels.insert(*l);
    }
    entries.push_back({normalize_signature(cols[0]),
                       {ApiLevel(parse_int(bounds[0], "semantic", line_no)),
                        ApiLevel(parse_int(bounds[1], "semantic", line_no))},
                       EntryKind::kSemantic, labels, "import"});
  }
  kb.set_corpus_levels(std::move(levels));
  kb.merge(entries);
  return kb;
}

KnowledgeBase import_directory(const std::filesystem::path& dir) {
  const auto lifetime = dir / "android_api_lifetime.txt";
  const auto semantic = dir / "android_api_semantic.txt";
  if (!std::filesystem::exists(lifetime) && !std::filesystem::exists(semantic)) {
    throw Error(ErrorCode::kInput, "no knowledge-base exports in " + dir.string());
  }
  return import_exports(std::filesystem::exists(lifetime) ? read_file(lifetime) : "",
                        std::filesystem::exists(semantic) ? read_file(semantic) : "");
}

std::vector<LevelStatsRow> stats(const KnowledgeBase& kb,
                                 std::span<const changes::ChangeReport> reports) {
  std::map<Boundary, LevelStatsRow> rows;
  const auto& levels = kb.corpus_levels();
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) rows[{levels[i], levels[i + 1]}];
  for (const auto& e : kb.entries()) {
    LevelStatsRow& r = rows[e.boundary];
    if (e.kind == EntryKind::kSignature) {
      if (e.labels.contains(IncompatLabel::kAddition)) ++r.additions;
      if (e.labels.contains(IncompatLabel::kRemoval)) ++r.removals;
      continue;
    }
    const bool rva = e.labels.contains(IncompatLabel::kReturnValueAlteration);
    const bool ehm = e.labels.contains(IncompatLabel::kExceptionHandlingModification);
    if (rva && ehm) {
      ++r.both;
    } else if (rva) {
      ++r.rva_only;
    } else if (ehm) {
      ++r.ehm_only;
    }
  }
  for (const auto& rep : reports) {
    LevelStatsRow& r = rows[rep.boundary];
    for (ChangeType t : members(rep.change_types)) ++r.change_types[static_cast<int>(t)];
  }

  std::vector<LevelStatsRow> out;
  LevelStatsRow total;
  total.boundary = "total";
  int acc = 0;
  for (auto& [b, r] : rows) {
    r.boundary = boundary_string(b);
    acc += r.additions + r.removals + r.rva_only + r.ehm_only + r.both;
    r.accumulated = acc;
    total.additions += r.additions;
    total.removals += r.removals;
    total.rva_only += r.rva_only;
    total.ehm_only += r.ehm_only;
    total.both += r.both;
    for (int i = 0; i < kChangeTypeCount; ++i) total.change_types[i] += r.change_types[i];
    out.push_back(r);
  }
  total.accumulated = acc;
  out.push_back(total);
  return out;
}

std::string stats_csv(std::span<const LevelStatsRow> rows) {
  std::ostringstream os;
  os << "boundary,additions,removals,rva_only,ehm_only,both,ct_return,ct_exception,"
        "ct_control,ct_other,ct_dependent,ct_nochange,accumulated\n";
  for (const auto& r : rows) {
    os << r.boundary << ',' << r.additions << ',' << r.removals << ',' << r.rva_only << ','
       << r.ehm_only << ',' << r.both;
    for (int c : r.change_types) os << ',' << c;
    os << ',' << r.accumulated << '\n';
  }
  return os.str();
}

void append_journal(const std::filesystem::path& path, const KnowledgeBase& kb) {
  std::set<std::string> seen;
  if (std::filesystem::exists(path)) {
    for (const auto& j : io::parse_jsonl(read_file(path), path.string())) {
      seen.insert(j.dump());
    }
  }
  std::string tail;
  for (const auto& e : kb.entries()) {
    std::string line = io::entry_to_json(e).dump();
    if (seen.insert(line).second) {
      tail += line;
      tail += '\n';
    }
  }
  if (tail.empty() && std::filesystem::exists(path)) return;
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::app);
  if (!os) throw Error(ErrorCode::kIo, "cannot append to " + path.string());
  os << tail;
  os.flush();
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

KnowledgeBase load_journal(const std::filesystem::path& path) {
  KnowledgeBase kb;
  if (!std::filesystem::exists(path)) return kb;
  std::vector<IncompatibilityEntry> entries;
  for (const auto& j : io::parse_jsonl(read_file(path), path.string())) {
    entries.push_back(io::entry_from_json(j));
  }
  kb.merge(entries);
  return kb;
}

}  // namespace apicompat::kb
