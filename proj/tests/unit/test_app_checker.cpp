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

#include <sstream>

#include "apicompat/app_checker.h"
#include "apicompat/error.h"
#include "apicompat/java_lexer.h"
#include "json.hpp"
#include "test_support.h"

namespace apicompat::appcheck {
namespace {

using apicompat::testing::build_kb;
using apicompat::testing::fixture;
using apicompat::testing::mini_aosp;
using apicompat::testing::TempDir;

constexpr const char* kProbePath = "src/main/java/com/example/guard/Probe.java";

const kb::KnowledgeBase& mini_kb() {
  static const kb::KnowledgeBase kb = build_kb(mini_aosp());
  return kb;
}

Interval guard_of(std::vector<BranchCondition> chain) {
  return extract_guard(chain).interval;
}

SdkRange range(int lo, int hi) { return {ApiLevel(lo), ApiLevel(hi)}; }

std::string probe_source() { return read_file(fixture("guard-app") / kProbePath); }

CheckReport check_text(const std::string& text, int min_sdk, const kb::KnowledgeBase& kb = mini_kb(),
                       int jobs = 1) {
  const std::vector<SourceFile> files = {{"Probe.java", text}};
  return check_sources(files, range(min_sdk, 33), kb, jobs);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

/// Wraps each of the given 1-based lines in `if (<cond>) { ... }`.
std::string wrap_lines(const std::string& text, const std::map<int, std::string>& conditions) {
  auto lines = split_lines(text);
  for (const auto& [line, cond] : conditions) {
    lines[line - 1] = "        if (" + cond + ") { " + lines[line - 1] + " }";
  }
  return join_lines(lines);
}

TEST(ParseManifest, Examples) {
  constexpr const char* head =
      R"(<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="x">)";
  const auto a = parse_manifest(std::string(head) + R"(<uses-sdk android:minSdkVersion="19"/></manifest>)");
  EXPECT_EQ(a.range, range(19, 33));
  const auto b = parse_manifest(std::string(head) +
                                R"(<uses-sdk android:minSdkVersion="19" android:maxSdkVersion="25" android:targetSdkVersion="24"/></manifest>)");
  EXPECT_EQ(b.range, range(19, 25));
  EXPECT_EQ(b.target_sdk, 24);
  const auto c = parse_manifest(std::string(head) + "<application/></manifest>");
  EXPECT_EQ(c.range, range(1, 33));
  EXPECT_FALSE(c.warnings.empty());
}

TEST(ParseManifest, Malformed) {
  try {
    parse_manifest("<manifest><uses-sdk android:minSdkVersion=\"19\"></manifest>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestParse);
  }
}

TEST(ParseSdkRange, Examples) {
  EXPECT_EQ(parse_sdk_range("15:33"), range(15, 33));
  EXPECT_THROW(parse_sdk_range("20:15"), Error);
  EXPECT_THROW(parse_sdk_range("abc"), Error);
}

TEST(ExtractGuard, Examples) {
  EXPECT_EQ(guard_of({{"android.os.Build.VERSION.SDK_INT >= 23", true}}), (Interval{23, 33}));
  EXPECT_EQ(guard_of({{"Build.VERSION.SDK_INT >= 21", false}}), (Interval{1, 20}));
  EXPECT_EQ(guard_of({{"Build.VERSION.SDK_INT < 29", true}, {"Build.VERSION.SDK_INT >= 16", true}}),
            (Interval{16, 28}));
}

TEST(ExtractGuard, Operators) {
  EXPECT_EQ(guard_of({{"SDK_INT > 20", true}}), (Interval{21, 33}));
  EXPECT_EQ(guard_of({{"SDK_INT <= 20", true}}), (Interval{1, 20}));
  EXPECT_EQ(guard_of({{"SDK_INT == 20", true}}), (Interval{20, 20}));
  EXPECT_EQ(guard_of({{"SDK_INT != 20", false}}), (Interval{20, 20}));
  EXPECT_EQ(guard_of({{"23 <= Build.VERSION.SDK_INT", true}}), (Interval{23, 33}));
  EXPECT_EQ(guard_of({{"SDK_INT >= Build.VERSION_CODES.M", true}}), (Interval{23, 33}));
  EXPECT_EQ(guard_of({{"(SDK_INT >= 16 && SDK_INT < 21)", true}}), (Interval{16, 20}));
  EXPECT_EQ(guard_of({{"!(SDK_INT >= 16)", true}}), (Interval{1, 15}));
  EXPECT_EQ(guard_of({{"SDK_INT < 16 || SDK_INT >= 21", false}}), (Interval{16, 20}));
}

TEST(ExtractGuard, UnknownConditionsConstrainNothing) {
  const auto g = extract_guard(std::vector<BranchCondition>{{"isFast()", true}, {"SDK_INT >= level", false}});
  EXPECT_TRUE(g.unconstrained);
  EXPECT_EQ(g.interval, (Interval{1, 33}));
  EXPECT_EQ(guard_of({{"flag && SDK_INT >= 16", true}}), (Interval{16, 33}));
  EXPECT_EQ(guard_of({{"flag && SDK_INT >= 16", false}}), (Interval{1, 33}));
  EXPECT_FALSE(extract_guard(std::vector<BranchCondition>{{"SDK_INT >= 16", true}}).unconstrained);
}

TEST(Violates, SafetyRule) {
  kb::IncompatibilityEntry add{normalize_signature("<p.A: void f()>"), {ApiLevel(15), ApiLevel(16)},
                               kb::EntryKind::kSignature, {IncompatLabel::kAddition}, ""};
  EXPECT_TRUE(violates(add, {15, 33}));
  EXPECT_FALSE(violates(add, {16, 33}));
  auto rem = add;
  rem.labels = {IncompatLabel::kRemoval};
  EXPECT_TRUE(violates(rem, {1, 16}));
  EXPECT_FALSE(violates(rem, {1, 15}));
  auto sem = add;
  sem.kind = kb::EntryKind::kSemantic;
  sem.labels = {IncompatLabel::kReturnValueAlteration};
  EXPECT_TRUE(violates(sem, {15, 16}));
  EXPECT_FALSE(violates(sem, {16, 33}));
  EXPECT_FALSE(violates(sem, {1, 15}));
  EXPECT_FALSE(violates(sem, {20, 10}));
}

constexpr const char* kDeviceIdsApp = R"(package a;
import android.view.InputDevice;
import android.os.Build;
class Ids {
    int[] ids() {
        return InputDevice.getDeviceIds();
    }
    int[] guarded() {
        if (Build.VERSION.SDK_INT >= 16) {
            return InputDevice.getDeviceIds();
        }
        return new int[0];
    }
}
)";

TEST(CheckSources, SemanticEntrySpan) {
  const auto report = check_text(kDeviceIdsApp, 15);
  ASSERT_EQ(report.issues.size(), 1u);
  const auto& issue = report.issues[0];
  EXPECT_EQ(issue.call_site.line, 6);
  EXPECT_EQ(issue.entry.kind, kb::EntryKind::kSemantic);
  EXPECT_EQ(issue.reachable, (Interval{15, 33}));
  EXPECT_EQ(issue.confidence, "high");
  EXPECT_EQ(report.call_sites, 2);
  EXPECT_TRUE(check_text(kDeviceIdsApp, 16).issues.empty());
}

TEST(CheckSources, RemovalAtLateBoundary) {
  kb::KnowledgeBase kb;
  kb.set_corpus_levels({ApiLevel(4), ApiLevel(25), ApiLevel(26), ApiLevel(33)});
  kb.merge(std::vector<kb::IncompatibilityEntry>{{normalize_signature("<q.Old: void gone(int)>"),
                                                  {ApiLevel(25), ApiLevel(26)}, kb::EntryKind::kSignature,
                                                  {IncompatLabel::kRemoval}, ""}});
  const std::string src = "package a;\nimport q.Old;\nclass U {\n  void f(Old o) { o.gone(1); }\n}\n";
  const auto report = check_text(src, 19, kb);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].entry.labels, LabelSet{IncompatLabel::kRemoval});
  EXPECT_EQ(report.issues[0].call_site.line, 4);
  EXPECT_TRUE(check_text("package a;\nimport q.Old;\nclass U {\n  void f(Old o) { o.gone(1, 2); }\n}\n", 19, kb)
                  .issues.empty());
}

TEST(CheckApp, GuardAppSeededViolations) {
  const auto report = check_app(fixture("guard-app"), mini_kb());
  EXPECT_EQ(report.range, range(15, 33));
  EXPECT_EQ(report.call_sites, 6);
  ASSERT_EQ(report.issues.size(), 3u);
  EXPECT_EQ(report.issues[0].call_site.line, 22);
  EXPECT_EQ(report.issues[0].entry.labels, LabelSet{IncompatLabel::kAddition});
  EXPECT_EQ(report.issues[1].call_site.line, 33);
  EXPECT_EQ(report.issues[1].entry.labels, LabelSet{IncompatLabel::kRemoval});
  EXPECT_EQ(report.issues[2].call_site.line, 45);
  EXPECT_EQ(report.issues[2].entry.kind, kb::EntryKind::kSemantic);
  EXPECT_TRUE(report.issues[2].entry.labels.contains(IncompatLabel::kExceptionHandlingModification));
  for (const auto& issue : report.issues) EXPECT_EQ(issue.call_site.file, kProbePath);
}

TEST(CheckApp, DemoApp) {
  const auto report = check_app(fixture("demo-app"), mini_kb());
  ASSERT_EQ(report.issues.size(), 2u);
  EXPECT_EQ(report.issues[0].entry.kind, kb::EntryKind::kSemantic);
  EXPECT_EQ(report.issues[1].entry.labels, LabelSet{IncompatLabel::kRemoval});
}

TEST(CheckApp, ManifestHandling) {
  TempDir dir;
  write_file(dir / "src/A.java", kDeviceIdsApp);
  try {
    check_app(dir.path(), mini_kb());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestMissing);
  }
  CheckOptions allow;
  allow.allow_missing_manifest = true;
  const auto r = check_app(dir.path(), mini_kb(), allow);
  EXPECT_EQ(r.range, range(1, 33));
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.issues.size(), 1u);

  CheckOptions assume;
  assume.assume_range = range(16, 33);
  EXPECT_TRUE(check_app(dir.path(), mini_kb(), assume).issues.empty());
  assume.assume_range = range(15, 33);
  EXPECT_EQ(check_app(fixture("guard-app"), mini_kb(), assume).issues.size(), 3u);
}

TEST(Properties, Monotonicity) {
  for (const std::string& text : {probe_source(), std::string(kDeviceIdsApp)}) {
    std::size_t previous = SIZE_MAX;
    for (int min_sdk = 1; min_sdk <= 33; ++min_sdk) {
      const std::size_t n = check_text(text, min_sdk).issues.size();
      EXPECT_LE(n, previous) << "minSdk " << min_sdk;
      previous = n;
    }
  }
}

TEST(Properties, GuardSufficiency) {
  const std::string text = probe_source();
  const auto before = check_text(text, 15);
  ASSERT_EQ(before.issues.size(), 3u);
  std::map<int, std::string> conditions;
  for (const auto& issue : before.issues) {
    const int x = issue.entry.boundary.from.value();
    const int x1 = issue.entry.boundary.to.value();
    const bool removal = issue.entry.labels.contains(IncompatLabel::kRemoval);
    conditions[issue.call_site.line] = removal ? "Build.VERSION.SDK_INT <= " + std::to_string(x)
                                               : "Build.VERSION.SDK_INT >= " + std::to_string(x1);
  }
  EXPECT_TRUE(check_text(wrap_lines(text, conditions), 15).issues.empty());

  // Early exits confine the rest of the block the same way.
  auto lines = split_lines(text);
  lines[44] = "        if (Build.VERSION.SDK_INT < 21) return false;\n" + lines[44];
  const auto early = check_text(join_lines(lines), 15);
  EXPECT_EQ(early.issues.size(), 2u);
}

TEST(Properties, ConservatismUnknownGuards) {
  const std::string text = probe_source();
  for (const char* cond : {"isSupported()", "Build.VERSION.SDK_INT >= minLevel", "flag || Build.VERSION.SDK_INT >= 30"}) {
    const auto wrapped = wrap_lines(text, {{22, cond}, {33, cond}, {45, cond}});
    EXPECT_EQ(check_text(wrapped, 15).issues.size(), 3u) << cond;
  }
}

TEST(Properties, Determinism) {
  const auto a = check_app(fixture("guard-app"), mini_kb());
  CheckOptions parallel;
  parallel.jobs = 4;
  const auto b = check_app(fixture("guard-app"), mini_kb(), parallel);
  EXPECT_EQ(issues_jsonl(a), issues_jsonl(b));
  EXPECT_EQ(summary_table(a), summary_table(b));
}

TEST(Output, JsonlFieldsAndSummaryHeader) {
  const auto report = check_app(fixture("guard-app"), mini_kb());
  const auto lines = split_lines(issues_jsonl(report));
  ASSERT_EQ(lines.size(), 3u);
  const auto j = nlohmann::json::parse(lines[0]);
  for (const char* key : {"file", "line", "signature", "boundary", "kind", "labels", "reachable", "confidence"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["line"], 22);
  EXPECT_EQ(j["kind"], "signature");
  EXPECT_NE(summary_table(report).find("intraprocedural"), std::string::npos);
}

TEST(Resolution, UnresolvedReceiverIsLowConfidence) {
  const std::string src = R"(package a;
class W {
    boolean f() {
        return lookup().getBoolean(0, true);
    }
}
)";
  const auto report = check_text(src, 15);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].confidence, "low");
}

TEST(Resolution, FieldsAndLocals) {
  const std::string src = R"(package a;
import android.content.res.TypedArray;
class W {
    private TypedArray first, second;
    boolean f() {
        return second.getBoolean(0, true);
    }
    boolean g(String getBoolean) {
        return getBoolean.isEmpty();
    }
}
)";
  const auto report = check_text(src, 15);
  ASSERT_EQ(report.issues.size(), 1u);
  EXPECT_EQ(report.issues[0].confidence, "high");
  EXPECT_EQ(report.issues[0].call_site.line, 6);
}

}  // namespace
}  // namespace apicompat::appcheck
