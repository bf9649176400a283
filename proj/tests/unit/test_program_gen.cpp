// Copyright 2026 The vpe Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "http_client.hpp"
#include "test_support.hpp"
#include "vpe/error.hpp"
#include "vpe/program_gen.hpp"

namespace vpe::gen {
namespace {

using nlohmann::json;

ExemplarSet two_exemplars() {
  ExemplarSet s;
  s.header = "Modules: objectEval, countEval.";
  s.exemplars = {{"a dog", "objectEval(img, 'dog')"},
                 {"two cats", "countEval(img,'cat','==2')"}};
  return s;
}

TEST(Exemplars, BundledSetIsValid) {
  const ExemplarSet s = ExemplarSet::bundled();
  EXPECT_EQ(s.exemplars.size(), 12u);
  EXPECT_FALSE(s.header.empty());
  EXPECT_NO_THROW(s.check());
}

TEST(Exemplars, LoadAndCheck) {
  testing::TempDir dir;
  const auto good = dir.write(
      "ex.json", R"~({"header":"h","exemplars":[{"prompt":"a dog","program":"objectEval(img, 'dog')"}]})~");
  const ExemplarSet s = ExemplarSet::load(good);
  EXPECT_EQ(s.header, "h");
  ASSERT_EQ(s.exemplars.size(), 1u);
  ExemplarSet bad = s;
  bad.exemplars[0].program = "vqa(img, 'q', 'yes|no', 'maybe')";
  EXPECT_THROW(bad.check(), Error);
}

TEST(IclRequest, LayoutAndOrder) {
  const auto r = build_icl_request("a red car", two_exemplars());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.text,
            "Modules: objectEval, countEval.\n\n"
            "Prompt: a dog\nProgram:\nobjectEval(img, 'dog')\n\n"
            "Prompt: two cats\nProgram:\ncountEval(img, 'cat', '==2')\n\n"
            "Prompt: a red car\nProgram:\n");
  EXPECT_EQ(build_icl_request("a red car", two_exemplars()).text, r.text);
}

TEST(IclRequest, EmptyExemplarSetWarns) {
  ExemplarSet s;
  s.header = "docs";
  const auto r = build_icl_request("x", s);
  EXPECT_EQ(r.text, "docs\n\nPrompt: x\nProgram:\n");
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Repair, PlainCompletion) {
  const auto r = repair_completion("objectEval(img, 'dog')\ncountEval(img, 'dog', '==2')");
  EXPECT_EQ(r.program.calls.size(), 2u);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Repair, CodeFencesAndLabelsAreStripped) {
  const auto plain = repair_completion("objectEval(img, 'dog')\ncountEval(img, 'dog', '==2')");
  const auto fenced = repair_completion(
      "Program:\n```python\nobjectEval(img, 'dog')\ncountEval(img, 'dog', '==2')\n```\n"
      "This program checks the dog.");
  EXPECT_EQ(fenced.program, plain.program);
}

TEST(Repair, InvalidStatementsAreDropped) {
  const auto r = repair_completion(
      "objectEval(img, 'dog')\nfooEval(img,'x')\ncountEval(img, 'dog', '==2')");
  EXPECT_EQ(dsl::print_program(r.program),
            "objectEval(img, 'dog')\ncountEval(img, 'dog', '==2')");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "dropped-statement");
  EXPECT_NE(r.diagnostics[0].message.find("fooEval"), std::string::npos);
}

TEST(Repair, SemicolonsAndMultilineStrings) {
  const auto r = repair_completion("objectEval(img, 'a;b'); textEval(img, 'two\nlines')");
  ASSERT_EQ(r.program.calls.size(), 2u);
  EXPECT_EQ(r.program.calls[0].arg(1), "a;b");
  EXPECT_EQ(r.program.calls[1].arg(1), "two\nlines");
}

TEST(Repair, NothingValidFails) {
  try {
    repair_completion("I cannot help with that.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGenerationFailed);
  }
}

TEST(Repair, OutputIsSubsequenceOfCleanedStatements) {
  const std::string completion =
      "```\nobjectEval(img, 'a')\nbad(img)\nvqa(img, 'q?', 'yes|no', 'maybe')\n"
      "spatialEval(img, 'a', 'b', 'left')\n```";
  const auto cleaned = clean_completion(completion);
  const auto r = repair_completion(completion);
  const auto same_call = [](const std::string& statement, const dsl::ModuleCall& call) {
    try {
      return dsl::parse_program(statement).calls.at(0) == call;
    } catch (const ParseError&) {
      return false;
    }
  };
  std::size_t j = 0;
  for (const auto& call : r.program.calls) {
    while (j < cleaned.statements.size() && !same_call(cleaned.statements[j], call)) ++j;
    ASSERT_LT(j, cleaned.statements.size());
    ++j;
  }
  EXPECT_EQ(r.program.calls.size(), 2u);
}

TEST(Generate, OfflineIsDeterministicAndNetworkFree) {
  OfflineCompletions source(std::map<std::string, std::string>{{"a dog and a cat", "objectEval(img, 'dog')\nobjectEval(img, 'cat')"}});
  const std::size_t before = detail::network_request_count();
  const auto a = generate_program("a dog and a cat", two_exemplars(), source);
  const auto b = generate_program("a dog and a cat", two_exemplars(), source);
  EXPECT_EQ(detail::network_request_count(), before);
  EXPECT_EQ(a.program, b.program);
  EXPECT_EQ(a.program.calls.size(), 2u);
  const auto printed = dsl::print_program(a.program);
  EXPECT_EQ(dsl::parse_program(printed), a.program);
}

TEST(Generate, OfflineMissIsUnknownKey) {
  OfflineCompletions source(std::map<std::string, std::string>{});
  try {
    generate_program("unseen", two_exemplars(), source);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownKey);
  }
}

TEST(Generate, OfflineFixtureFromFile) {
  testing::TempDir dir;
  GenConfig c;
  c.offline_fixture = dir.write("completions.json", R"~({"a dog":"objectEval(img, 'dog')"})~");
  const auto source = make_source(c);
  const auto r = generate_program("a dog", two_exemplars(), *source);
  EXPECT_EQ(dsl::print_program(r.program), "objectEval(img, 'dog')");
}

// Counts requests and serves scripted completions.
class ScriptedSource final : public CompletionSource {
 public:
  explicit ScriptedSource(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const std::string&, const std::string& request) override {
    requests.push_back(request);
    return replies_.at(requests.size() - 1);
  }
  std::vector<std::string> requests;

 private:
  std::vector<std::string> replies_;
};

TEST(Generate, RepromptOnlyWhenEnabled) {
  ScriptedSource once({"nonsense", "objectEval(img, 'dog')"});
  EXPECT_THROW(generate_program("a dog", two_exemplars(), once, false), Error);
  EXPECT_EQ(once.requests.size(), 1u);
  ScriptedSource twice({"nonsense", "objectEval(img, 'dog')"});
  const auto r = generate_program("a dog", two_exemplars(), twice, true);
  EXPECT_EQ(twice.requests.size(), 2u);
  EXPECT_EQ(r.program.calls.size(), 1u);
}

class ChatServer {
 public:
  ChatServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ChatServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Chat, SendsOpenAiShapeWithBearerKey) {
  ChatServer srv;
  json seen;
  std::string auth;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"~({"choices":[{"message":{"role":"assistant","content":"objectEval(img, 'dog')"}}]})~",
                    "application/json");
  });
  ::setenv("VPE_LLM_KEY", "sk-test", 1);
  GenConfig c;
  c.endpoint = srv.url();
  ChatCompletions chat(c);
  ::unsetenv("VPE_LLM_KEY");
  const auto r = generate_program("a dog", two_exemplars(), chat);
  EXPECT_EQ(dsl::print_program(r.program), "objectEval(img, 'dog')");
  EXPECT_EQ(auth, "Bearer sk-test");
  EXPECT_EQ(seen["model"], "gpt-35-turbo");
  EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.0);
  ASSERT_EQ(seen["messages"].size(), 1u);
  EXPECT_EQ(seen["messages"][0]["role"], "user");
  EXPECT_EQ(seen["messages"][0]["content"], build_icl_request("a dog", two_exemplars()).text);
}

TEST(Chat, ClientErrorIsNotRetried) {
  ChatServer srv;
  std::atomic<int> calls{0};
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
  });
  GenConfig c;
  c.endpoint = srv.url();
  ChatCompletions chat(c);
  try {
    chat.complete("p", "req");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(calls.load(), 1);
}

TEST(Chat, RequiresEndpoint) {
  ::unsetenv("VPE_LLM_URL");
  EXPECT_THROW(ChatCompletions(GenConfig{}), Error);
  GenConfig bad;
  bad.endpoint = "http://127.0.0.1:1";
  bad.temperature = -1;
  EXPECT_THROW(ChatCompletions{bad}, Error);
}

TEST(Coverage, Examples) {
  const auto dog = dsl::parse_program("objectEval(img, 'dog')");
  EXPECT_DOUBLE_EQ(coverage_stats("a dog", dog).fraction, 1.0);
  const auto c = coverage_stats("a red dog", dog);
  EXPECT_DOUBLE_EQ(c.fraction, 0.5);
  EXPECT_EQ(c.content_words, (std::vector<std::string>{"red", "dog"}));
  EXPECT_EQ(c.missing, (std::vector<std::string>{"red"}));
}

TEST(Coverage, CountsAndPlurals) {
  const auto p = dsl::parse_program("countEval(img, 'dog', '==3')");
  EXPECT_DOUBLE_EQ(coverage_stats("three dogs", p).fraction, 1.0);
  EXPECT_DOUBLE_EQ(coverage_stats("3 dogs", p).fraction, 1.0);
}

TEST(Coverage, FractionIsBounded) {
  const auto p = dsl::parse_program("textEval(img, 'open')");
  for (const char* prompt : {"", "the", "open open open", "a sign that reads open 24 hours"}) {
    const auto c = coverage_stats(prompt, p);
    EXPECT_GE(c.fraction, 0.0);
    EXPECT_LE(c.fraction, 1.0);
    EXPECT_EQ(c.covered.size() + c.missing.size(), c.content_words.size());
  }
}

}  // namespace
}  // namespace vpe::gen
