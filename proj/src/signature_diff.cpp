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

#include "apicompat/signature_diff.h"

#include <algorithm>
#include <map>

#include "apicompat/error.h"

namespace apicompat::sigdiff {

namespace {

std::map<std::string, const ApiRecord*> index_level(std::span<const ApiRecord> facts,
                                                    ApiLevel level) {
  std::map<std::string, const ApiRecord*> out;
  for (const ApiRecord& r : facts) {
    if (r.level != level) {
      throw Error(ErrorCode::kPrecondition,
                  "record " + render_signature(r.signature) + " has level " +
                      std::to_string(r.level.value()) + ", expected " +
                      std::to_string(level.value()));
    }
    if (!out.emplace(r.signature.identity_key(), &r).second) {
      throw Error(ErrorCode::kInternalConsistency,
                  "duplicate identity key at level " + std::to_string(level.value()) + ": " +
                      r.signature.identity_key());
    }
  }
  return out;
}

void sort_signatures(std::vector<ApiSignature>& sigs) {
  std::sort(sigs.begin(), sigs.end(), [](const ApiSignature& a, const ApiSignature& b) {
    return render_signature(a) < render_signature(b);
  });
}

}  // namespace

SignatureDiff diff_levels(ApiLevel level_x, std::span<const ApiRecord> facts_x,
                          ApiLevel level_x1, std::span<const ApiRecord> facts_x1) {
  if (!(level_x < level_x1)) {
    throw Error(ErrorCode::kPrecondition, "diff levels must be increasing");
  }
  const auto old_index = index_level(facts_x, level_x);
  const auto new_index = index_level(facts_x1, level_x1);

  SignatureDiff diff;
  diff.level_x = level_x;
  diff.level_x1 = level_x1;
  for (const auto& [key, rec] : new_index) {
    if (!old_index.contains(key)) diff.added.push_back(rec->signature);
  }
  for (const auto& [key, old_rec] : old_index) {
    const auto it = new_index.find(key);
    if (it == new_index.end()) {
      diff.removed.push_back(old_rec->signature);
      continue;
    }
    const ApiRecord& new_rec = *it->second;
    const bool same = old_rec->body == new_rec.body &&
                      old_rec->annotations == new_rec.annotations &&
                      old_rec->comment == new_rec.comment &&
                      old_rec->signature.return_type == new_rec.signature.return_type;
    if (same) {
      ++diff.retained_identical;
    } else {
      diff.retained_changed.emplace_back(*old_rec, new_rec);
    }
  }
  sort_signatures(diff.added);
  sort_signatures(diff.removed);
  std::sort(diff.retained_changed.begin(), diff.retained_changed.end(),
            [](const auto& a, const auto& b) {
              return render_signature(a.second.signature) < render_signature(b.second.signature);
            });
  return diff;
}

SignatureDiff diff_levels(std::span<const ApiRecord> facts_x,
                          std::span<const ApiRecord> facts_x1) {
  if (facts_x.empty() || facts_x1.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "cannot infer levels from an empty fact list; pass levels explicitly");
  }
  return diff_levels(facts_x.front().level, facts_x, facts_x1.front().level, facts_x1);
}

std::vector<kb::IncompatibilityEntry> detect_signature_incompat(const SignatureDiff& diff,
                                                                const std::string& provenance) {
  std::vector<kb::IncompatibilityEntry> out;
  const Boundary b = diff.boundary();
  for (const ApiSignature& s : diff.added) {
    out.push_back({s, b, kb::EntryKind::kSignature, LabelSet{IncompatLabel::kAddition},
                   provenance});
  }
  for (const ApiSignature& s : diff.removed) {
    out.push_back({s, b, kb::EntryKind::kSignature, LabelSet{IncompatLabel::kRemoval},
                   provenance});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return render_signature(a.signature) < render_signature(b.signature);
  });
  return out;
}

}  // namespace apicompat::sigdiff
