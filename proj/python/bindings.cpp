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

// Python bindings. Structured values cross the boundary as JSON text; the
// apicompat package decodes them into plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "apicompat/app_checker.h"
#include "apicompat/change_classifier.h"
#include "apicompat/cli.h"
#include "apicompat/error.h"
#include "apicompat/eval.h"
#include "apicompat/extraction.h"
#include "apicompat/json_io.h"
#include "apicompat/knowledge_base.h"
#include "apicompat/semantic_detector.h"
#include "apicompat/signature_diff.h"

namespace py = pybind11;
using apicompat::io::json;

namespace {

apicompat::ApiRecord record(const std::string& text) {
  return apicompat::io::record_from_json(json::parse(text));
}

std::string records_json(const std::vector<apicompat::ApiRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(apicompat::io::record_to_json(r));
  return out.dump();
}

std::string scan_corpus(const std::string& root, int lo, int hi, bool public_only, int jobs) {
  apicompat::extraction::ScanOptions options;
  options.public_only = public_only;
  options.jobs = jobs;
  const auto index =
      apicompat::extraction::scan_corpus(root, apicompat::ApiLevel(lo), apicompat::ApiLevel(hi), options);
  json out;
  for (const auto& [level, records] : index.facts) {
    json rows = json::array();
    for (const auto& r : records) rows.push_back(apicompat::io::record_to_json(r));
    out[std::to_string(level.value())] = std::move(rows);
  }
  return out.dump();
}

std::string diff_levels(const std::string& old_records, const std::string& new_records) {
  std::vector<apicompat::ApiRecord> a, b;
  for (const auto& j : json::parse(old_records)) a.push_back(apicompat::io::record_from_json(j));
  for (const auto& j : json::parse(new_records)) b.push_back(apicompat::io::record_from_json(j));
  const auto d = apicompat::sigdiff::diff_levels(a, b);
  json out;
  out["boundary"] = apicompat::io::boundary_to_json(d.boundary());
  out["added"] = json::array();
  out["removed"] = json::array();
  out["retained_changed"] = json::array();
  for (const auto& s : d.added) out["added"].push_back(apicompat::render_signature(s));
  for (const auto& s : d.removed) out["removed"].push_back(apicompat::render_signature(s));
  for (const auto& p : d.retained_changed) {
    out["retained_changed"].push_back(apicompat::render_signature(p.second.signature));
  }
  out["retained_identical"] = d.retained_identical;
  return out.dump();
}

std::string classify_change(const std::string& old_record, const std::string& new_record) {
  return apicompat::io::change_report_to_json(
             apicompat::changes::classify_change(record(old_record), record(new_record)))
      .dump();
}

std::string build_prompt(const std::string& old_record, const std::string& new_record,
                         bool include_comments, bool include_ast, bool use_cot, int shots) {
  apicompat::semantic::PromptOptions o;
  o.include_comments = include_comments;
  o.include_ast = include_ast;
  o.use_cot = use_cot;
  o.shots = shots;
  return apicompat::semantic::build_prompt(record(old_record), record(new_record), o);
}

std::string parse_model_output(const std::string& text, bool require_change_types) {
  const auto a = apicompat::semantic::parse_model_output(text, require_change_types);
  json out;
  out["labels"] = apicompat::label_names(a.labels);
  out["change_types"] = a.has_change_types ? json(apicompat::change_type_names(a.change_types))
                                           : json(nullptr);
  return out.dump();
}

std::string detect_baseline(const std::string& old_record, const std::string& new_record) {
  const auto v = apicompat::semantic::detect_semantic(record(old_record), record(new_record), {});
  json out;
  out["signature"] = apicompat::render_signature(v.signature);
  out["boundary"] = apicompat::io::boundary_to_json(v.boundary);
  out["labels"] = apicompat::label_names(v.labels);
  out["change_types"] = apicompat::change_type_names(v.change_types);
  out["rationale"] = v.rationale;
  return out.dump();
}

std::vector<apicompat::eval::Labels> label_lists(const std::vector<std::vector<std::string>>& v) {
  std::vector<apicompat::eval::Labels> out;
  for (const auto& s : v) out.emplace_back(s.begin(), s.end());
  return out;
}

std::string compute_prf(const std::vector<std::vector<std::string>>& predictions,
                        const std::vector<std::vector<std::string>>& golds,
                        const std::vector<std::string>& universe) {
  const auto m = apicompat::eval::compute_prf(label_lists(predictions), label_lists(golds), universe);
  json out;
  for (const auto& [label, s] : m.per_label) {
    out["per_label"][label] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  out["macro"] = {{"precision", m.macro_precision}, {"recall", m.macro_recall}, {"f1", m.macro_f1}};
  out["micro"] = {{"precision", m.micro_precision}, {"recall", m.micro_recall}, {"f1", m.micro_f1}};
  return out.dump();
}

std::pair<double, double> accuracy_success_rate(const std::vector<std::vector<std::string>>& predictions,
                                                const std::vector<std::vector<std::string>>& golds) {
  const auto b = apicompat::eval::accuracy_success_rate(label_lists(predictions), label_lists(golds));
  return {b.accuracy, b.success_rate};
}

double krippendorff_alpha(
    const std::vector<std::vector<std::optional<std::vector<std::string>>>>& annotations,
    const std::string& distance) {
  std::vector<std::vector<std::optional<apicompat::eval::Labels>>> m;
  for (const auto& item : annotations) {
    auto& row = m.emplace_back();
    for (const auto& v : item) {
      if (v) row.emplace_back(apicompat::eval::Labels(v->begin(), v->end()));
      else row.emplace_back(std::nullopt);
    }
  }
  return apicompat::eval::krippendorff_alpha(m, apicompat::eval::distance_by_name(distance));
}

std::string check_app(const std::string& app, const std::string& kb_dir,
                      const std::string& assume_range, bool allow_missing_manifest) {
  const auto kb = apicompat::kb::import_directory(kb_dir);
  apicompat::appcheck::CheckOptions options;
  if (!assume_range.empty()) options.assume_range = apicompat::appcheck::parse_sdk_range(assume_range);
  options.allow_missing_manifest = allow_missing_manifest;
  return apicompat::appcheck::issues_jsonl(apicompat::appcheck::check_app(app, kb, options));
}

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = apicompat::cli::run(args, out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "apicompat core bindings";

  static py::exception<apicompat::Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const apicompat::Error& e) {
      const std::string msg =
          std::string(apicompat::error_code_name(e.code())) + ": " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  m.def("extract_records", [](const std::string& text, int level, const std::string& path) {
    return records_json(apicompat::extraction::extract_api_records(text, apicompat::ApiLevel(level), path));
  });
  m.def("scan_corpus", &scan_corpus, py::arg("root"), py::arg("lo"), py::arg("hi"),
        py::arg("public_only") = false, py::arg("jobs") = 1);
  m.def("diff_levels", &diff_levels);
  m.def("classify_change", &classify_change);
  m.def("to_ast_text", [](const std::string& body) { return apicompat::changes::to_ast_text(body); });
  m.def("build_prompt", &build_prompt);
  m.def("parse_model_output", &parse_model_output);
  m.def("detect_baseline", &detect_baseline);
  m.def("compute_prf", &compute_prf);
  m.def("accuracy_success_rate", &accuracy_success_rate);
  m.def("krippendorff_alpha", &krippendorff_alpha);
  m.def("check_app", &check_app);
  m.def("run_cli", &run_cli);
  m.attr("__version__") = apicompat::cli::kVersion;
}
