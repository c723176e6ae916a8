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

// Benchmark loading and the evaluation metrics: per-label precision, recall
// and F1 with macro and micro averages, binary accuracy with success rate,
// and Krippendorff's alpha for inter-annotator agreement.

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apicompat/semantic_detector.h"
#include "apicompat/types.h"

namespace apicompat::eval {

using Labels = std::set<std::string>;

Labels to_labels(const LabelSet& s);
Labels to_labels(const ChangeTypeSet& s);

struct Benchmark {
  std::vector<LabeledPair> pairs;
  std::vector<std::string> warnings;
};

/// Line-delimited labeled pairs. Schema violations are reported as
/// Error(kSchema) with "file:line".
Benchmark load_benchmark(const std::filesystem::path& file);
Benchmark parse_benchmark(std::string_view text, std::string_view source = "benchmark");

struct LabelScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int support = 0;  // gold positives
};

struct Metrics {
  std::map<std::string, LabelScore> per_label;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double micro_precision = 0;
  double micro_recall = 0;
  double micro_f1 = 0;
};

double f1_score(double precision, double recall);

/// One-vs-rest scores per label; macro averages run over labels with at
/// least one gold positive. Throws Error(kInput) on a length mismatch or a
/// label outside the universe.
Metrics compute_prf(const std::vector<Labels>& predictions, const std::vector<Labels>& golds,
                    const std::vector<std::string>& universe);

struct Binary {
  double accuracy = 0;
  double success_rate = 0;
};

/// Binarizes each set (non-empty: incompatible). Throws Error(kInput) on
/// empty or mismatched input and Error(kUndefinedMetric) when no gold item is
/// incompatible.
Binary accuracy_success_rate(const std::vector<Labels>& predictions,
                             const std::vector<Labels>& golds);

using Distance = std::function<double(const Labels&, const Labels&)>;

/// 1 - |A n B| / |A u B|; two empty sets are at distance 0.
double jaccard_distance(const Labels& a, const Labels& b);
/// 0 when the sets are equal, 1 otherwise.
double nominal_distance(const Labels& a, const Labels& b);

/// Distance by name ("jaccard" or "nominal"). Throws Error(kConfiguration).
Distance distance_by_name(std::string_view name);

/// `annotations[item][annotator]`, nullopt for a missing rating. Throws
/// Error(kInsufficientData) with fewer than two pairable values.
double krippendorff_alpha(const std::vector<std::vector<std::optional<Labels>>>& annotations,
                          const Distance& distance = jaccard_distance);

/// Annotation file: JSON lines {"item": str, "annotator": str, "labels": [...]}.
/// Items and annotators are ordered by first appearance.
std::vector<std::vector<std::optional<Labels>>> load_annotations(const std::filesystem::path& file);

struct Evaluation {
  Metrics labels;
  Metrics change_types;
  Binary binary;
  bool binary_defined = true;
  int items = 0;
  int failures = 0;  // unparseable model outputs
  std::vector<semantic::SemanticVerdict> verdicts;
};

/// Runs the detector over the benchmark and scores labels and change types.
/// The change-type universe includes "No Change".
Evaluation evaluate(const std::vector<LabeledPair>& pairs, const semantic::DetectorConfig& config);

}  // namespace apicompat::eval
