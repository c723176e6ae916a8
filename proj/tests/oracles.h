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

// Independent reference implementations used to check the production code.

#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apicompat/types.h"

namespace apicompat::testing {

struct LevelPair {
  std::vector<ApiRecord> x;
  std::vector<ApiRecord> x1;
};

/// Two adjacent levels drawn from a shared pool of up to `max_records`
/// identities; retained records sometimes change body, comment, annotations
/// or return type.
inline LevelPair random_level_pair(unsigned seed, int max_records) {
  std::mt19937 rng(seed);
  const int pool = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_records));
  const char* types[] = {"int", "long", "String", "boolean", "float[]"};
  LevelPair p;
  for (int i = 0; i < pool; ++i) {
    ApiRecord r;
    r.signature.class_fqn = "gen.pkg" + std::to_string(i % 7) + ".C" + std::to_string(i % 13);
    r.signature.method_name = "m" + std::to_string(i);
    for (unsigned k = 0; k < rng() % 3; ++k) r.signature.param_types.push_back(types[rng() % 5]);
    r.signature.return_type = types[rng() % 5];
    r.body = "{ return " + std::to_string(i) + "; }";
    r.comment = "c" + std::to_string(i);
    const unsigned where = rng() % 4;  // 0: only x, 1: only x1, 2-3: both
    if (where != 1) {
      ApiRecord a = r;
      a.level = ApiLevel(20);
      p.x.push_back(a);
    }
    if (where != 0) {
      ApiRecord b = r;
      b.level = ApiLevel(21);
      if (where == 3) {
        switch (rng() % 4) {
          case 0: b.body = "{ return -" + std::to_string(i) + "; }"; break;
          case 1: b.comment += " (updated)"; break;
          case 2: b.annotations.push_back("@Deprecated"); break;
          default: b.signature.return_type = "Object"; break;
        }
      }
      p.x1.push_back(b);
    }
  }
  std::shuffle(p.x.begin(), p.x.end(), rng);
  std::shuffle(p.x1.begin(), p.x1.end(), rng);
  return p;
}

struct OracleDiff {
  std::set<std::string> added;
  std::set<std::string> removed;
  std::set<std::string> changed;  // rendered later signatures
  int identical = 0;
};

/// Nested-loop comparison on (class, name, params).
inline OracleDiff brute_force_diff(const std::vector<ApiRecord>& x, const std::vector<ApiRecord>& x1) {
  auto same_key = [](const ApiRecord& a, const ApiRecord& b) {
    return a.signature.class_fqn == b.signature.class_fqn &&
           a.signature.method_name == b.signature.method_name &&
           a.signature.param_types == b.signature.param_types;
  };
  OracleDiff d;
  for (const auto& a : x) {
    bool found = false;
    for (const auto& b : x1) {
      if (!same_key(a, b)) continue;
      found = true;
      const bool same = a.body == b.body && a.comment == b.comment &&
                        a.annotations == b.annotations &&
                        a.signature.return_type == b.signature.return_type;
      if (same) ++d.identical;
      else d.changed.insert(render_signature(b.signature));
    }
    if (!found) d.removed.insert(render_signature(a.signature));
  }
  for (const auto& b : x1) {
    bool found = false;
    for (const auto& a : x) found = found || same_key(a, b);
    if (!found) d.added.insert(render_signature(b.signature));
  }
  return d;
}

}  // namespace apicompat::testing
