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

#include <atomic>
#include <cstdlib>
#include <thread>

#include "apicompat/error.h"
#include "apicompat/semantic_detector.h"
#include "httplib.h"
#include "json.hpp"
#include "test_support.h"

namespace apicompat::semantic {
namespace {

using apicompat::testing::find_record;
using apicompat::testing::fixture;
using apicompat::testing::make_record;
using apicompat::testing::mini_aosp;
using apicompat::testing::TempDir;

constexpr const char* kDeviceIds = "<android.view.InputDevice: int[] getDeviceIds()>";
constexpr const char* kPolicy = "<android.app.Activity: boolean getNotificationPolicy()>";
constexpr const char* kGetBoolean = "<android.content.res.TypedArray: boolean getBoolean(int,boolean)>";

std::pair<ApiRecord, ApiRecord> device_ids_pair() {
  return {find_record(mini_aosp(), 15, kDeviceIds), find_record(mini_aosp(), 16, kDeviceIds)};
}

int count(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (auto at = haystack.find(needle); at != std::string::npos; at = haystack.find(needle, at + 1)) ++n;
  return n;
}

TEST(BuildPrompt, MatchesFrozenGoldens) {
  const auto [o, n] = device_ids_pair();
  const struct {
    const char* file;
    PromptOptions options;
  } cases[] = {
      {"getDeviceIds_cot.txt", {false, false, true, 3}},
      {"getDeviceIds_comments_cot.txt", {true, false, true, 3}},
      {"getDeviceIds_ast_cot.txt", {false, true, true, 3}},
      {"getDeviceIds_comments_ast_cot.txt", {true, true, true, 3}},
      {"getDeviceIds_nocot.txt", {false, false, false, 3}},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(build_prompt(o, n, c.options), read_file(fixture("prompts") / c.file)) << c.file;
  }
}

TEST(BuildPrompt, SectionCounts) {
  const auto [o, n] = device_ids_pair();
  const std::string plain = build_prompt(o, n, {});
  EXPECT_EQ(count(plain, "### Example"), 3);
  EXPECT_EQ(count(plain, "Comment:"), 0);
  EXPECT_EQ(count(plain, "AST:"), 0);
  // Two version blocks per demonstration plus two for the query.
  EXPECT_EQ(count(build_prompt(o, n, {true, false, true, 3}), "Comment:\n"), 8);
  EXPECT_EQ(count(build_prompt(o, n, {false, true, true, 3}), "AST:\n"), 8);
}

TEST(BuildPrompt, ZeroShots) {
  const auto [o, n] = device_ids_pair();
  const std::string p = build_prompt(o, n, {false, false, true, 0});
  EXPECT_EQ(count(p, "### Example"), 0);
  EXPECT_EQ(count(p, "### Query"), 1);
}

TEST(BuildPrompt, NoCotOmitsChangeTypeRequest) {
  const auto [o, n] = device_ids_pair();
  EXPECT_EQ(build_prompt(o, n, {false, false, false, 3}).find("CHANGE_TYPES"), std::string::npos);
}

TEST(BuildPrompt, Errors) {
  const auto [o, n] = device_ids_pair();
  try {
    build_prompt(o, n, {false, false, true, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
  EXPECT_THROW(build_prompt(o, n, {false, false, true, -1}), Error);
  EXPECT_THROW(build_prompt(o, find_record(mini_aosp(), 16, kGetBoolean), {}), Error);
}

TEST(ParseModelOutput, Grammar) {
  const auto a = parse_model_output("CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]");
  EXPECT_EQ(a.change_types, ChangeTypeSet{ChangeType::kReturnStatementChanged});
  EXPECT_EQ(a.labels, LabelSet{IncompatLabel::kReturnValueAlteration});

  const auto b = parse_model_output("Let me look.\nThe body is the same.\nCHANGE_TYPES: [No Change]\nVERDICT: [None]\n");
  EXPECT_EQ(b.change_types, ChangeTypeSet{ChangeType::kNoChange});
  EXPECT_TRUE(b.labels.empty());

  const auto c = parse_model_output(
      "change_types: [exception handling statement changed, control dependency changed]\n"
      "verdict: [exception handling modification, return value alteration]");
  EXPECT_EQ(c.labels, (LabelSet{IncompatLabel::kReturnValueAlteration,
                                IncompatLabel::kExceptionHandlingModification}));
}

TEST(ParseModelOutput, Malformed) {
  for (const char* text : {"The API changed a lot.",
                           "CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Addition]",
                           "CHANGE_TYPES: [Bogus]\nVERDICT: [None]",
                           "VERDICT: [None]"}) {
    try {
      parse_model_output(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedOutput) << text;
    }
  }
  EXPECT_TRUE(parse_model_output("VERDICT: [None]", false).labels.empty());
}

TEST(BaselineVerdict, RuleTable) {
  EXPECT_EQ(baseline_verdict({ChangeType::kReturnStatementChanged}, false),
            LabelSet{IncompatLabel::kReturnValueAlteration});
  EXPECT_TRUE(baseline_verdict({ChangeType::kOtherStatementChanged, ChangeType::kDependentApiChanged}, false).empty());
  EXPECT_EQ(baseline_verdict({ChangeType::kExceptionHandlingStatementChanged,
                              ChangeType::kControlDependencyChanged}, false),
            LabelSet{IncompatLabel::kExceptionHandlingModification});
  EXPECT_EQ(baseline_verdict({ChangeType::kOtherStatementChanged}, true),
            LabelSet{IncompatLabel::kReturnValueAlteration});
}

TEST(DetectSemantic, BaselineOnSeededPairs) {
  const auto [o, n] = device_ids_pair();
  const auto v = detect_semantic(o, n, {});
  EXPECT_EQ(v.labels, (LabelSet{IncompatLabel::kReturnValueAlteration,
                                IncompatLabel::kExceptionHandlingModification}));
  EXPECT_EQ(v.source, "baseline");
  EXPECT_EQ(boundary_string(v.boundary), "15:16");

  const auto policy = detect_semantic(find_record(mini_aosp(), 23, kPolicy),
                                      find_record(mini_aosp(), 24, kPolicy), {});
  EXPECT_TRUE(policy.labels.contains(IncompatLabel::kReturnValueAlteration));

  const auto recycled = detect_semantic(find_record(mini_aosp(), 20, kGetBoolean),
                                        find_record(mini_aosp(), 21, kGetBoolean), {});
  EXPECT_TRUE(recycled.labels.contains(IncompatLabel::kExceptionHandlingModification));
  EXPECT_TRUE(recycled.change_types.includes({ChangeType::kExceptionHandlingStatementChanged,
                                              ChangeType::kControlDependencyChanged}));
}

TEST(DetectSemantic, BaselineIsDeterministic) {
  const auto [o, n] = device_ids_pair();
  const auto a = detect_semantic(o, n, {});
  const auto b = detect_semantic(o, n, {});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.change_types, b.change_types);
  EXPECT_EQ(a.rationale, b.rationale);
}

TEST(DetectSemantic, NoChangeNeverCallsBackend) {
  auto backend = std::make_shared<ScriptedBackend>([](const std::string&, int) {
    return std::string("CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]");
  });
  DetectorConfig config;
  config.backend = backend;
  const auto o = make_record("<p.A: int f()>", 20, "{ return 1; }", "old");
  const auto n = make_record("<p.A: int f()>", 21, "{\n  // same\n  return 1;\n}", "new");
  const auto v = detect_semantic(o, n, config);
  EXPECT_TRUE(v.labels.empty());
  EXPECT_EQ(v.change_types, ChangeTypeSet{ChangeType::kNoChange});
  EXPECT_EQ(backend->calls(), 0);
}

TEST(DetectSemantic, ModelAnswerIsUsed) {
  auto backend = std::make_shared<ScriptedBackend>([](const std::string& prompt, int) {
    EXPECT_NE(prompt.find("### Query"), std::string::npos);
    return std::string("Analysis...\nCHANGE_TYPES: [Return Statement Changed]\nVERDICT: [None]");
  }, "m1");
  DetectorConfig config;
  config.backend = backend;
  const auto [o, n] = device_ids_pair();
  const auto v = detect_semantic(o, n, config);
  EXPECT_TRUE(v.labels.empty());
  EXPECT_EQ(v.change_types, ChangeTypeSet{ChangeType::kReturnStatementChanged});
  EXPECT_EQ(v.source, "model:m1");
  EXPECT_FALSE(v.failed);
}

TEST(DetectSemantic, ReasksOnceThenFails) {
  auto fixed = std::make_shared<ScriptedBackend>([](const std::string&, int call) {
    return call == 0 ? std::string("no idea")
                     : std::string("CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]");
  });
  DetectorConfig config;
  config.backend = fixed;
  const auto [o, n] = device_ids_pair();
  const auto ok = detect_semantic(o, n, config);
  EXPECT_EQ(fixed->calls(), 2);
  EXPECT_EQ(ok.labels, LabelSet{IncompatLabel::kReturnValueAlteration});

  auto broken = std::make_shared<ScriptedBackend>([](const std::string&, int) { return std::string("?"); });
  config.backend = broken;
  const auto bad = detect_semantic(o, n, config);
  EXPECT_EQ(broken->calls(), 2);
  EXPECT_TRUE(bad.failed);
  EXPECT_TRUE(bad.labels.empty());
  EXPECT_EQ(bad.rationale, kUnparseableRationale);
}

TEST(DetectSemantic, CacheReplaysResponses) {
  TempDir dir;
  const auto [o, n] = device_ids_pair();
  auto backend = std::make_shared<ScriptedBackend>([](const std::string&, int) {
    return std::string("CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]");
  });
  DetectorConfig config;
  config.backend = backend;
  config.cache = std::make_shared<ResponseCache>(dir.path());
  detect_semantic(o, n, config);
  detect_semantic(o, n, config);
  EXPECT_EQ(backend->calls(), 1);

  config.cache = std::make_shared<ResponseCache>(dir.path());  // fresh process, same directory
  const auto v = detect_semantic(o, n, config);
  EXPECT_EQ(backend->calls(), 1);
  EXPECT_EQ(v.labels, LabelSet{IncompatLabel::kReturnValueAlteration});
  EXPECT_NE(ResponseCache::key("a", "p"), ResponseCache::key("b", "p"));
}

TEST(DetectSemantic, StubBackend) {
  TempDir dir;
  const auto [o, n] = device_ids_pair();
  const std::string prompt = build_prompt(o, n, {});
  write_file(dir / (sha256_hex(prompt) + ".txt"),
             "CHANGE_TYPES: [Exception Handling Statement Changed]\nVERDICT: [Exception Handling Modification]\n");
  DetectorConfig config;
  config.backend = std::make_shared<StubBackend>(dir.path());
  EXPECT_EQ(detect_semantic(o, n, config).labels,
            LabelSet{IncompatLabel::kExceptionHandlingModification});

  config.prompt.include_comments = true;  // different prompt, no canned answer
  try {
    detect_semantic(o, n, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_THROW(StubBackend(dir / "missing"), Error);
}

TEST(DetectAll, PreservesOrderAndIsolatesFailures) {
  const auto [o, n] = device_ids_pair();
  std::vector<std::pair<ApiRecord, ApiRecord>> pairs;
  for (int i = 0; i < 12; ++i) {
    auto a = make_record("<p.A: int f" + std::to_string(i) + "()>", 20, "{ return 1; }");
    auto b = make_record("<p.A: int f" + std::to_string(i) + "()>", 21, "{ return " + std::to_string(i + 2) + "; }");
    pairs.emplace_back(a, b);
  }
  auto backend = std::make_shared<ScriptedBackend>([](const std::string& prompt, int) -> std::string {
    if (prompt.find("return 7;") != std::string::npos) {
      throw Error(ErrorCode::kBackendUnavailable, "down");
    }
    const bool odd = prompt.find("return 3;") != std::string::npos;
    return odd ? "CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [None]"
               : "CHANGE_TYPES: [Return Statement Changed]\nVERDICT: [Return Value Alteration]";
  });
  DetectorConfig config;
  config.backend = backend;
  config.concurrency = 4;
  const auto verdicts = detect_all(pairs, config);
  ASSERT_EQ(verdicts.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(verdicts[i].signature, pairs[i].second.signature);
    EXPECT_EQ(verdicts[i].failed, i == 5) << i;
  }
  EXPECT_TRUE(verdicts[1].labels.empty());
  EXPECT_EQ(verdicts[0].labels, LabelSet{IncompatLabel::kReturnValueAlteration});
  EXPECT_EQ(verdicts[5].rationale.rfind("backend-unavailable", 0), 0u);
}

TEST(RateLimiter, SpacesRequests) {
  RateLimiter limiter(200);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) limiter.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(19));
}

class ChatServer {
 public:
  explicit ChatServer(int failures) : failures_(failures) {
    server_.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = requests_++;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      if (n < failures_) {
        res.status = 500;
        return;
      }
      nlohmann::json reply = {
          {"choices", {{{"message", {{"role", "assistant"},
                                     {"content", "CHANGE_TYPES: [No Change]\nVERDICT: [None]"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ChatServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat"; }
  int requests() const { return requests_; }
  const std::string& last_body() const { return last_body_; }
  const std::string& last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int failures_;
  std::atomic<int> requests_{0};
  std::string last_body_;
  std::string last_auth_;
};

HttpChatBackend::Config local_config(const std::string& url) {
  HttpChatBackend::Config c;
  c.url = url;
  c.model = "local-model";
  c.token_env = "APICOMPAT_TEST_TOKEN";
  c.base_delay = std::chrono::milliseconds(5);
  c.timeout = std::chrono::seconds(5);
  return c;
}

TEST(HttpChatBackend, WireContractWithRetry) {
  ::setenv("APICOMPAT_TEST_TOKEN", "secret", 1);
  ChatServer server(1);
  HttpChatBackend backend(local_config(server.url()));
  EXPECT_EQ(backend.complete("hello"), "CHANGE_TYPES: [No Change]\nVERDICT: [None]");
  EXPECT_EQ(server.requests(), 2);
  const auto body = nlohmann::json::parse(server.last_body());
  EXPECT_EQ(body["model"], "local-model");
  EXPECT_EQ(body["temperature"], 0);
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "hello");
  EXPECT_EQ(server.last_auth(), "Bearer secret");
  ::unsetenv("APICOMPAT_TEST_TOKEN");
}

TEST(HttpChatBackend, GivesUpAfterBoundedAttempts) {
  ChatServer server(100);
  HttpChatBackend backend(local_config(server.url()));
  try {
    backend.complete("hello");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(server.requests(), 3);
  EXPECT_THROW(HttpChatBackend(local_config("ftp://x")), Error);
}

}  // namespace
}  // namespace apicompat::semantic
