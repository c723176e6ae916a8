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

#include "apicompat/json_io.h"

#include "apicompat/error.h"

namespace apicompat::io {

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::kSchema, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

std::string string_field(const json& j, const char* name, bool required = true) {
  if (!required && (!j.is_object() || !j.contains(name) || j.at(name).is_null())) return {};
  const json& v = field(j, name);
  if (!v.is_string()) throw Error(ErrorCode::kSchema, std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& j, const char* name, bool required = true) {
  if (!required && (!j.is_object() || !j.contains(name) || j.at(name).is_null())) return {};
  const json& v = field(j, name);
  if (!v.is_array()) throw Error(ErrorCode::kSchema, std::string("'") + name + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) {
      throw Error(ErrorCode::kSchema, std::string("'") + name + "' must hold strings");
    }
    out.push_back(x.get<std::string>());
  }
  return out;
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kSchema, std::string("'") + name + "' must be an integer");
  }
  return v.get<int>();
}

json labels_to_json(const LabelSet& labels) { return label_names(labels); }

}  // namespace

json boundary_to_json(const Boundary& b) { return json::array({b.from.value(), b.to.value()}); }

Boundary boundary_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw Error(ErrorCode::kSchema, "boundary must be [x, x1]");
  }
  return {ApiLevel(j[0].get<int>()), ApiLevel(j[1].get<int>())};
}

json record_to_json(const ApiRecord& r) {
  json j;
  j["signature"] = render_signature(r.signature);
  j["level"] = r.level.value();
  j["body"] = r.body;
  j["annotations"] = r.annotations;
  j["comment"] = r.comment;
  j["throws"] = r.thrown_types;
  j["file"] = r.file;
  j["line"] = r.line;
  j["public"] = r.is_public;
  return j;
}

ApiRecord record_from_json(const json& j) {
  ApiRecord r;
  r.signature = normalize_signature(string_field(j, "signature"));
  r.level = ApiLevel(int_field(j, "level"));
  r.body = string_field(j, "body");
  r.annotations = string_array(j, "annotations", false);
  r.comment = string_field(j, "comment", false);
  r.thrown_types = string_array(j, "throws", false);
  r.file = string_field(j, "file", false);
  if (j.contains("line")) r.line = int_field(j, "line");
  if (j.contains("public") && j.at("public").is_boolean()) r.is_public = j.at("public").get<bool>();
  return r;
}

json entry_to_json(const kb::IncompatibilityEntry& e) {
  json j;
  j["signature"] = render_signature(e.signature);
  j["boundary"] = boundary_to_json(e.boundary);
  j["kind"] = std::string(kb::entry_kind_name(e.kind));
  j["labels"] = labels_to_json(e.labels);
  j["provenance"] = e.provenance;
  return j;
}

kb::IncompatibilityEntry entry_from_json(const json& j) {
  kb::IncompatibilityEntry e;
  e.signature = normalize_signature(string_field(j, "signature"));
  e.boundary = boundary_from_json(field(j, "boundary"));
  const std::string kind = string_field(j, "kind");
  if (kind == "signature") {
    e.kind = kb::EntryKind::kSignature;
  } else if (kind == "semantic") {
    e.kind = kb::EntryKind::kSemantic;
  } else {
    throw Error(ErrorCode::kSchema, "unknown entry kind '" + kind + "'");
  }
  for (const auto& name : string_array(j, "labels")) {
    const auto l = parse_label(name);
    if (!l) throw Error(ErrorCode::kSchema, "unknown label '" + name + "'");
    e.labels.insert(*l);
  }
  e.provenance = string_field(j, "provenance", false);
  return e;
}

json change_report_to_json(const changes::ChangeReport& r) {
  json j;
  j["signature"] = render_signature(r.signature);
  j["boundary"] = boundary_to_json(r.boundary);
  j["change_types"] = change_type_names(r.change_types);
  json ev = json::array();
  for (const auto& e : r.evidence) {
    ev.push_back({{"type", std::string(change_type_name(e.type))},
                  {"old", e.old_snippet},
                  {"new", e.new_snippet}});
  }
  j["evidence"] = std::move(ev);
  return j;
}

changes::ChangeReport change_report_from_json(const json& j) {
  changes::ChangeReport r;
  r.signature = normalize_signature(string_field(j, "signature"));
  r.boundary = boundary_from_json(field(j, "boundary"));
  for (const auto& name : string_array(j, "change_types")) {
    const auto t = parse_change_type(name);
    if (!t) throw Error(ErrorCode::kSchema, "unknown change type '" + name + "'");
    r.change_types.insert(*t);
  }
  if (j.contains("evidence")) {
    for (const auto& ev : j.at("evidence")) {
      const auto t = parse_change_type(string_field(ev, "type"));
      if (!t) throw Error(ErrorCode::kSchema, "unknown evidence type");
      r.evidence.push_back({*t, string_field(ev, "old"), string_field(ev, "new")});
    }
  }
  return r;
}

LabeledPair labeled_pair_from_json(const json& j) {
  LabeledPair p;
  const ApiSignature sig = normalize_signature(string_field(j, "signature"));
  const std::string sig_new = string_field(j, "signature_new", false);
  p.old_record.signature = sig;
  p.new_record.signature = sig_new.empty() ? sig : normalize_signature(sig_new);
  if (!p.old_record.signature.same_identity(p.new_record.signature)) {
    throw Error(ErrorCode::kSchema, "signature_new must keep the identity key");
  }
  p.old_record.level = ApiLevel(int_field(j, "level_old"));
  p.new_record.level = ApiLevel(int_field(j, "level_new"));
  p.old_record.body = string_field(j, "body_old");
  p.new_record.body = string_field(j, "body_new");
  p.old_record.annotations = string_array(j, "annotations_old", false);
  p.new_record.annotations = string_array(j, "annotations_new", false);
  p.old_record.comment = string_field(j, "comment_old", false);
  p.new_record.comment = string_field(j, "comment_new", false);
  for (const auto& name : string_array(j, "gold_change_types")) {
    const auto t = parse_change_type(name);
    if (!t) throw Error(ErrorCode::kSchema, "unknown change type '" + name + "'");
    p.gold_change_types.insert(*t);
  }
  if (p.gold_change_types.contains(ChangeType::kNoChange) && p.gold_change_types.size() > 1) {
    throw Error(ErrorCode::kSchema, "'No Change' cannot be combined with other change types");
  }
  for (const auto& name : string_array(j, "gold_labels")) {
    const auto l = parse_label(name);
    if (!l || !kSemanticLabels.contains(*l)) {
      throw Error(ErrorCode::kSchema, "unknown semantic label '" + name + "'");
    }
    p.gold_labels.insert(*l);
  }
  return p;
}

json labeled_pair_to_json(const LabeledPair& p) {
  json j;
  j["signature"] = render_signature(p.old_record.signature);
  if (p.new_record.signature != p.old_record.signature) {
    j["signature_new"] = render_signature(p.new_record.signature);
  }
  j["level_old"] = p.old_record.level.value();
  j["level_new"] = p.new_record.level.value();
  j["body_old"] = p.old_record.body;
  j["body_new"] = p.new_record.body;
  j["annotations_old"] = p.old_record.annotations;
  j["annotations_new"] = p.new_record.annotations;
  j["comment_old"] = p.old_record.comment;
  j["comment_new"] = p.new_record.comment;
  j["gold_change_types"] = change_type_names(p.gold_change_types);
  j["gold_labels"] = label_names(p.gold_labels);
  return j;
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<json> parse_jsonl(std::string_view text, std::string_view source) {
  std::vector<json> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kSchema, std::string(source) + ":" + std::to_string(line_no) +
                                          ": invalid JSON: " + e.what());
    }
    if (end == text.size()) break;
  }
  return out;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace apicompat::io
