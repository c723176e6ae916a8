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

#include "apicompat/eval.h"

#include <algorithm>

#include "apicompat/error.h"
#include "apicompat/json_io.h"
#include "apicompat/util.h"

namespace apicompat::eval {

namespace {

double ratio(int num, int den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kInput, "predictions and golds differ in length (" +
                                       std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Labels to_labels(const LabelSet& s) {
  const auto names = label_names(s);
  return {names.begin(), names.end()};
}

Labels to_labels(const ChangeTypeSet& s) {
  const auto names = change_type_names(s);
  return {names.begin(), names.end()};
}

Benchmark parse_benchmark(std::string_view text, std::string_view source) {
  Benchmark b;
  // Parse line by line so schema errors carry the line number.
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    try {
      const auto rows = io::parse_jsonl(line, where);
      b.pairs.push_back(io::labeled_pair_from_json(rows.at(0)));
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(ErrorCode::kSchema, msg.starts_with(where) ? msg : where + ": " + msg);
    }
  }
  if (b.pairs.empty()) b.warnings.push_back(std::string(source) + ": no benchmark items");
  return b;
}

Benchmark load_benchmark(const std::filesystem::path& file) {
  if (!std::filesystem::is_regular_file(file)) {
    throw Error(ErrorCode::kInput, "benchmark file not found: " + file.string());
  }
  return parse_benchmark(read_file(file), file.string());
}

double f1_score(double precision, double recall) {
  return precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
}

Metrics compute_prf(const std::vector<Labels>& predictions, const std::vector<Labels>& golds,
                    const std::vector<std::string>& universe) {
  check_lengths(predictions.size(), golds.size());
  const Labels known(universe.begin(), universe.end());
  Metrics m;
  for (const auto& l : universe) m.per_label[l];
  auto check = [&](const Labels& s) {
    for (const auto& l : s) {
      if (!known.contains(l)) throw Error(ErrorCode::kInput, "label outside the universe: " + l);
    }
  };
  for (std::size_t i = 0; i < golds.size(); ++i) {
    check(predictions[i]);
    check(golds[i]);
    for (const auto& l : universe) {
      const bool p = predictions[i].contains(l);
      const bool g = golds[i].contains(l);
      LabelScore& s = m.per_label[l];
      s.tp += p && g;
      s.fp += p && !g;
      s.fn += !p && g;
      s.support += g;
    }
  }
  int tp = 0, fp = 0, fn = 0, counted = 0;
  for (auto& [label, s] : m.per_label) {
    s.precision = ratio(s.tp, s.tp + s.fp);
    s.recall = ratio(s.tp, s.tp + s.fn);
    s.f1 = f1_score(s.precision, s.recall);
    tp += s.tp;
    fp += s.fp;
    fn += s.fn;
    if (s.support == 0) continue;
    ++counted;
    m.macro_precision += s.precision;
    m.macro_recall += s.recall;
    m.macro_f1 += s.f1;
  }
  if (counted > 0) {
    m.macro_precision /= counted;
    m.macro_recall /= counted;
    m.macro_f1 /= counted;
  }
  m.micro_precision = ratio(tp, tp + fp);
  m.micro_recall = ratio(tp, tp + fn);
  m.micro_f1 = f1_score(m.micro_precision, m.micro_recall);
  return m;
}

Binary accuracy_success_rate(const std::vector<Labels>& predictions,
                             const std::vector<Labels>& golds) {
  check_lengths(predictions.size(), golds.size());
  if (golds.empty()) throw Error(ErrorCode::kInput, "no items to score");
  int correct = 0, positives = 0, found = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool p = !predictions[i].empty();
    const bool g = !golds[i].empty();
    correct += p == g;
    positives += g;
    found += p && g;
  }
  if (positives == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "success rate undefined: no incompatible gold items");
  }
  return {ratio(correct, static_cast<int>(golds.size())), ratio(found, positives)};
}

double jaccard_distance(const Labels& a, const Labels& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.contains(x);
  const std::size_t all = a.size() + b.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(all);
}

double nominal_distance(const Labels& a, const Labels& b) { return a == b ? 0.0 : 1.0; }

Distance distance_by_name(std::string_view name) {
  if (name == "jaccard") return jaccard_distance;
  if (name == "nominal") return nominal_distance;
  throw Error(ErrorCode::kConfiguration,
              "unknown distance '" + std::string(name) + "' (expected jaccard or nominal)");
}

double krippendorff_alpha(const std::vector<std::vector<std::optional<Labels>>>& annotations,
                          const Distance& distance) {
  std::vector<std::vector<const Labels*>> units;
  std::vector<const Labels*> all;
  for (const auto& item : annotations) {
    std::vector<const Labels*> values;
    for (const auto& v : item) {
      if (v) values.push_back(&*v);
    }
    if (values.size() < 2) continue;
    all.insert(all.end(), values.begin(), values.end());
    units.push_back(std::move(values));
  }
  const double n = static_cast<double>(all.size());
  if (all.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "fewer than two pairable ratings");
  }
  double observed = 0;
  for (const auto& u : units) {
    double sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j) sum += distance(*u[i], *u[j]);
      }
    }
    observed += sum / static_cast<double>(u.size() - 1);
  }
  observed /= n;
  if (observed == 0) return 1.0;
  double expected = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i != j) expected += distance(*all[i], *all[j]);
    }
  }
  expected /= n * (n - 1);
  return 1.0 - observed / expected;
}

std::vector<std::vector<std::optional<Labels>>> load_annotations(
    const std::filesystem::path& file) {
  if (!std::filesystem::is_regular_file(file)) {
    throw Error(ErrorCode::kInput, "annotation file not found: " + file.string());
  }
  std::vector<std::string> items, annotators;
  std::map<std::pair<std::size_t, std::size_t>, Labels> ratings;
  auto index_of = [](std::vector<std::string>& v, const std::string& key) {
    const auto it = std::find(v.begin(), v.end(), key);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(key);
    return v.size() - 1;
  };
  for (const auto& row : io::parse_jsonl(read_file(file), file.string())) {
    if (!row.is_object() || !row.contains("item") || !row.contains("annotator") ||
        !row.contains("labels") || !row["labels"].is_array()) {
      throw Error(ErrorCode::kSchema, file.string() + ": rows need item, annotator and labels");
    }
    const std::string item = row["item"].is_string() ? row["item"].get<std::string>()
                                                     : row["item"].dump();
    const std::size_t i = index_of(items, item);
    const std::size_t a = index_of(annotators, row["annotator"].get<std::string>());
    Labels labels;
    for (const auto& l : row["labels"]) labels.insert(l.get<std::string>());
    ratings[{i, a}] = std::move(labels);
  }
  std::vector<std::vector<std::optional<Labels>>> out(
      items.size(), std::vector<std::optional<Labels>>(annotators.size()));
  for (auto& [key, labels] : ratings) out[key.first][key.second] = std::move(labels);
  return out;
}

Evaluation evaluate(const std::vector<LabeledPair>& pairs, const semantic::DetectorConfig& config) {
  std::vector<std::pair<ApiRecord, ApiRecord>> inputs;
  inputs.reserve(pairs.size());
  for (const auto& p : pairs) inputs.emplace_back(p.old_record, p.new_record);
  Evaluation ev;
  ev.items = static_cast<int>(pairs.size());
  ev.verdicts = semantic::detect_all(inputs, config);

  std::vector<Labels> pred_labels, gold_labels, pred_types, gold_types;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& v = ev.verdicts[i];
    ev.failures += v.failed;
    pred_labels.push_back(to_labels(v.labels));
    gold_labels.push_back(to_labels(pairs[i].gold_labels));
    pred_types.push_back(to_labels(v.change_types));
    gold_types.push_back(to_labels(pairs[i].gold_change_types));
  }
  ev.labels = compute_prf(pred_labels, gold_labels, label_names(kSemanticLabels));
  std::vector<std::string> type_universe;
  for (int t = 0; t < kChangeTypeCount; ++t) {
    type_universe.emplace_back(change_type_name(static_cast<ChangeType>(t)));
  }
  ev.change_types = compute_prf(pred_types, gold_types, type_universe);
  if (!pairs.empty()) {
    try {
      ev.binary = accuracy_success_rate(pred_labels, gold_labels);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedMetric) throw;
      ev.binary_defined = false;
      int correct = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        correct += pred_labels[i].empty() == gold_labels[i].empty();
      }
      ev.binary.accuracy = ratio(correct, static_cast<int>(pairs.size()));
    }
  } else {
    ev.binary_defined = false;
  }
  return ev;
}

}  // namespace apicompat::eval
