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

#include <gtest/gtest.h>

#include "apicompat/error.h"
#include "apicompat/extraction.h"
#include "apicompat/signature_diff.h"
#include "oracles.h"
#include "test_support.h"

namespace apicompat::sigdiff {
namespace {

using apicompat::testing::make_record;

std::set<std::string> rendered(const std::vector<ApiSignature>& sigs) {
  std::set<std::string> out;
  for (const auto& s : sigs) out.insert(render_signature(s));
  return out;
}

TEST(DiffLevels, IdenticalRecords) {
  const auto a = make_record("<p.A: int f()>", 15, "{ return 1; }");
  auto b = a;
  b.level = ApiLevel(16);
  const auto d = diff_levels(std::vector{a}, std::vector{b});
  EXPECT_TRUE(d.added.empty());
  EXPECT_TRUE(d.removed.empty());
  EXPECT_TRUE(d.retained_changed.empty());
  EXPECT_EQ(d.retained_identical, 1);
}

TEST(DiffLevels, Addition) {
  const auto a = make_record("<p.A: int f()>", 15, "{ return 1; }");
  auto a16 = a;
  a16.level = ApiLevel(16);
  const auto b = make_record("<p.A: void g(int)>", 16, "{ }");
  const auto d = diff_levels(std::vector{a}, std::vector{a16, b});
  EXPECT_EQ(rendered(d.added), std::set<std::string>{"<p.A: void g(int)>"});
  EXPECT_TRUE(d.removed.empty());
}

TEST(DiffLevels, CommentOnlyChangeIsRetainedChanged) {
  const auto a = make_record("<p.A: int f()>", 15, "{ return 1; }", "old");
  const auto b = make_record("<p.A: int f()>", 16, "{ return 1; }", "new");
  const auto d = diff_levels(std::vector{a}, std::vector{b});
  ASSERT_EQ(d.retained_changed.size(), 1u);
  EXPECT_EQ(d.retained_identical, 0);
}

TEST(DiffLevels, ReturnTypeChangeIsNotAddRemove) {
  const auto a = make_record("<p.A: int f()>", 15, "{ return 1; }");
  const auto b = make_record("<p.A: long f()>", 16, "{ return 1; }");
  const auto d = diff_levels(std::vector{a}, std::vector{b});
  EXPECT_TRUE(d.added.empty());
  EXPECT_TRUE(d.removed.empty());
  EXPECT_EQ(d.retained_changed.size(), 1u);
}

TEST(DiffLevels, DuplicateKeyIsInternalError) {
  const auto a = make_record("<p.A: int f()>", 15, "{}");
  const auto b = make_record("<p.A: int f()>", 16, "{}");
  try {
    diff_levels(std::vector{a, a}, std::vector{b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInternalConsistency);
  }
}

TEST(DiffLevels, LevelMismatchIsPrecondition) {
  const auto a = make_record("<p.A: int f()>", 15, "{}");
  const auto b = make_record("<p.A: int f()>", 16, "{}");
  try {
    diff_levels(ApiLevel(16), std::vector{a}, ApiLevel(17), std::vector{b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(DiffLevels, RandomizedAgainstBruteForce) {
  for (unsigned seed = 0; seed < 25; ++seed) {
    const auto p = apicompat::testing::random_level_pair(seed, 200);
    const auto oracle = apicompat::testing::brute_force_diff(p.x, p.x1);
    const auto d = diff_levels(ApiLevel(20), p.x, ApiLevel(21), p.x1);
    EXPECT_EQ(rendered(d.added), oracle.added);
    EXPECT_EQ(rendered(d.removed), oracle.removed);
    std::set<std::string> changed;
    for (const auto& [a, b] : d.retained_changed) {
      EXPECT_TRUE(a.signature.same_identity(b.signature));
      EXPECT_EQ(a.level, ApiLevel(20));
      EXPECT_EQ(b.level, ApiLevel(21));
      changed.insert(render_signature(b.signature));
    }
    EXPECT_EQ(changed, oracle.changed);
    EXPECT_EQ(d.retained_identical, oracle.identical);
    // |x1| = |x| - |removed| + |added|
    EXPECT_EQ(p.x1.size(), p.x.size() - d.removed.size() + d.added.size());
  }
}

TEST(DetectSignatureIncompat, AddedAndRemoved) {
  const auto c = make_record("<p.A: void c()>", 15, "{}");
  const auto b = make_record("<p.A: void b()>", 16, "{}");
  const auto d = diff_levels(std::vector{c}, std::vector{b});
  const auto entries = detect_signature_incompat(d, "test");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(render_signature(entries[0].signature), "<p.A: void b()>");
  EXPECT_TRUE(entries[0].labels.contains(IncompatLabel::kAddition));
  EXPECT_EQ(render_signature(entries[1].signature), "<p.A: void c()>");
  EXPECT_TRUE(entries[1].labels.contains(IncompatLabel::kRemoval));
  EXPECT_EQ(entries[0].boundary, (Boundary{ApiLevel(15), ApiLevel(16)}));
  EXPECT_EQ(entries[0].kind, kb::EntryKind::kSignature);
  // Idempotent and order-stable.
  const auto again = detect_signature_incompat(d, "test");
  ASSERT_EQ(again.size(), entries.size());
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_TRUE(kb::same_exported_fields(again[i], entries[i]));
}

TEST(DetectSignatureIncompat, EmptyDiff) {
  EXPECT_TRUE(detect_signature_incompat(SignatureDiff{ApiLevel(1), ApiLevel(2), {}, {}, {}, 0}).empty());
}

TEST(DetectSignatureIncompat, ChangedBodyIsRetainedNotSignature) {
  const auto index = extraction::scan_corpus(apicompat::testing::fixture("mini-aosp"), ApiLevel(15), ApiLevel(16));
  const auto d = diff_levels(ApiLevel(15), index.facts.at(ApiLevel(15)), ApiLevel(16),
                             index.facts.at(ApiLevel(16)));
  const std::string key = "<android.view.InputDevice: int[] getDeviceIds()>";
  for (const auto& e : detect_signature_incompat(d)) EXPECT_NE(render_signature(e.signature), key);
  bool retained = false;
  for (const auto& p : d.retained_changed) retained = retained || render_signature(p.second.signature) == key;
  EXPECT_TRUE(retained);
}

}  // namespace
}  // namespace apicompat::sigdiff
