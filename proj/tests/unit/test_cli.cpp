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

#include "apicompat/cli.h"
#include "json.hpp"
#include "test_support.h"

namespace apicompat::cli {
namespace {

using apicompat::testing::fixture;
using apicompat::testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args, const Environment& env = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, &env);
  return {code, out.str(), err.str()};
}

nlohmann::json manifest_config(const std::filesystem::path& out) {
  return nlohmann::json::parse(read_file(out / "manifest.json"))["config"];
}

std::size_t line_count(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const std::string kCorpus = fixture("mini-aosp").string();

TEST(Cli, HelpAndUsage) {
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("--assume-sdk-range"), std::string::npos);
  const auto none = invoke({});
  EXPECT_EQ(none.code, kExitUsage);
  EXPECT_FALSE(none.err.empty());
  EXPECT_EQ(invoke({"extract", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"extract", "--jobs", "0", "--corpus", kCorpus}).code, kExitUsage);
}

TEST(Cli, MissingCorpus) {
  TempDir dir;
  const auto r = invoke({"extract", "--corpus", (dir / "nope").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("corpus-not-found"), std::string::npos) << r.err;
}

TEST(Cli, CommandMayFollowFlags) {
  TempDir dir;
  EXPECT_EQ(invoke({"--corpus", kCorpus, "--out", dir.path().string(), "extract"}).code, kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "facts.jsonl"));
}

TEST(Cli, Precedence) {
  TempDir dir;
  write_file(dir / "cfg.conf", "# defaults\nlevels = 15:20\nshots = 2\n");
  const std::string out = (dir / "o").string();
  const std::string cfg = (dir / "cfg.conf").string();

  ASSERT_EQ(invoke({"extract", "--corpus", kCorpus, "--out", out, "--config", cfg}).code, kExitOk);
  EXPECT_EQ(manifest_config(out)["levels"], "15:20");
  EXPECT_EQ(manifest_config(out)["shots"], 2);

  ASSERT_EQ(invoke({"extract", "--corpus", kCorpus, "--out", out, "--config", cfg},
                   {{"APICOMPAT_LEVELS", "15:16"}}).code, kExitOk);
  EXPECT_EQ(manifest_config(out)["levels"], "15:16");

  ASSERT_EQ(invoke({"extract", "--corpus", kCorpus, "--out", out, "--config", cfg, "--levels", "20:24"},
                   {{"APICOMPAT_LEVELS", "15:16"}}).code, kExitOk);
  EXPECT_EQ(manifest_config(out)["levels"], "20:24");

  ASSERT_EQ(invoke({"extract", "--out", out}, {{"APICOMPAT_CORPUS", kCorpus}, {"APICOMPAT_CONFIG", cfg}}).code,
            kExitOk);
  EXPECT_EQ(manifest_config(out)["levels"], "15:20");

  write_file(dir / "bad.conf", "no_such_key = 1\n");
  const auto bad = invoke({"extract", "--corpus", kCorpus, "--out", out, "--config", (dir / "bad.conf").string()});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_NE(bad.err.find("configuration"), std::string::npos) << bad.err;
}

TEST(Cli, PipelineOnMiniCorpus) {
  TempDir dir;
  const std::string out = dir.path().string();
  const auto r = invoke({"pipeline", "--corpus", kCorpus, "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"facts.jsonl", "scan_report.json", "diff.jsonl", "changes.jsonl", "verdicts.jsonl",
                        "failures.jsonl", "kb/android_api_lifetime.txt", "kb/android_api_semantic.txt",
                        "kb/journal.jsonl", "stats.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(line_count(dir / "verdicts.jsonl"), 3u);
  EXPECT_EQ(line_count(dir / "failures.jsonl"), 0u);
  const std::string semantic = read_file(dir / "kb/android_api_semantic.txt");
  EXPECT_NE(semantic.find("<android.view.InputDevice: int[] getDeviceIds()>\t15:16\tRVA,EHM"), std::string::npos)
      << semantic;

  const std::string journal = read_file(dir / "kb/journal.jsonl");
  ASSERT_EQ(invoke({"pipeline", "--corpus", kCorpus, "--out", out}).code, kExitOk);
  EXPECT_EQ(read_file(dir / "kb/journal.jsonl"), journal);

  const auto check = invoke({"check-app", "--app", fixture("guard-app").string(), "--kb", (dir / "kb").string(),
                             "--out", (dir / "check").string()});
  EXPECT_EQ(check.code, kExitOk) << check.err;
  EXPECT_EQ(line_count(dir / "check/issues.jsonl"), 3u);
  EXPECT_NE(check.out.find("intraprocedural"), std::string::npos);

  const auto no_manifest = invoke({"check-app", "--app", (dir / "kb").string(), "--kb", (dir / "kb").string()});
  EXPECT_EQ(no_manifest.code, kExitError);
  EXPECT_NE(no_manifest.err.find("manifest-missing"), std::string::npos) << no_manifest.err;
}

TEST(Cli, StubBackendFailuresArePartial) {
  TempDir dir;
  std::filesystem::create_directories(dir / "stubs");
  const auto r = invoke({"pipeline", "--corpus", kCorpus, "--out", (dir / "o").string(), "--backend", "stub",
                         "--stub-dir", (dir / "stubs").string(), "--save-prompts"});
  EXPECT_EQ(r.code, kExitPartial) << r.err;
  EXPECT_EQ(line_count(dir / "o/failures.jsonl"), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "o/stats.csv"));

  // Answering every saved prompt makes the rerun complete.
  for (const auto& entry : std::filesystem::directory_iterator(dir / "o/prompts")) {
    write_file(dir / "stubs" / entry.path().filename(),
               "CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]\n");
  }
  const auto again = invoke({"detect", "--corpus", kCorpus, "--out", (dir / "o2").string(), "--backend", "stub",
                             "--stub-dir", (dir / "stubs").string()});
  EXPECT_EQ(again.code, kExitOk) << again.err;
  EXPECT_EQ(line_count(dir / "o2/failures.jsonl"), 0u);
}

TEST(Cli, UnparseableSourceIsSkippedAndPartial) {
  TempDir dir;
  write_file(dir / "corpus/20/p/A.java", "package p; public class A { public int f() { return 1; } }");
  write_file(dir / "corpus/20/p/Broken.java", "package p; public class Broken { void f() { if (x) { }");
  const auto r = invoke({"extract", "--corpus", (dir / "corpus").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, kExitPartial) << r.err;
  const auto report = nlohmann::json::parse(read_file(dir / "o/scan_report.json"));
  ASSERT_EQ(report["skipped"].size(), 1u);
  EXPECT_EQ(report["records"], 1);
}

TEST(Cli, EvalCommand) {
  TempDir dir;
  const auto r = invoke({"eval", "--benchmark", fixture("benchmark/sample.jsonl").string(), "--annotations",
                         fixture("benchmark/annotations.jsonl").string(), "--distance", "nominal", "--out",
                         dir.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_file(dir / "eval.json"));
  EXPECT_EQ(j["items"], 4);
  EXPECT_NEAR(j["alpha"]["value"].get<double>(), 2.0 / 3.0, 1e-9);
  EXPECT_EQ(invoke({"eval", "--annotations", fixture("benchmark/annotations.jsonl").string(), "--distance", "cosine"})
                .code,
            kExitUsage);
}

TEST(Cli, BackendConfigurationErrors) {
  TempDir dir;
  const auto r = invoke({"detect", "--corpus", kCorpus, "--out", dir.path().string(), "--backend", "http"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("model-url"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace apicompat::cli
