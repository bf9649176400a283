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

#include <algorithm>
#include <random>
#include <regex>

#include "vpe/error.hpp"
#include "vpe/report.hpp"

namespace vpe::report {
namespace {

ModuleResult make_result(const std::string& call, int score, const std::string& explanation,
                         std::vector<Annotation> annotations = {}, bool errored = false) {
  ModuleResult r;
  r.call = dsl::parse_program(call).calls.at(0);
  r.score = score;
  r.errored = errored;
  r.explanation = explanation;
  r.annotations = std::move(annotations);
  return r;
}

EvalReport tagged(double score, const std::string& skill, const std::string& model = {}) {
  EvalReport r;
  r.score = score;
  r.skill = skill;
  r.model = model;
  return r;
}

TEST(TextReport, PassingStatement) {
  EvalReport r;
  r.results = {make_result("objectEval(img,'dog')", 1, "found dog (1 box)")};
  r.score = 1.0;
  EXPECT_EQ(render_text_report(r),
            "[1] objectEval(img, 'dog') — found dog (1 box)\n"
            "score: 1.00\n");
}

TEST(TextReport, ErroredAndMean) {
  EvalReport r;
  r.results = {make_result("objectEval(img, 'dog')", 1, "found dog (1 box)"),
               make_result("countEval(img, 'dog', 'x')", 0, "error: bad", {}, true),
               make_result("textEval(img, 'shop')", 0, "did not find text 'shop' (read: '')")};
  r.score = 1.0 / 3.0;
  EXPECT_EQ(render_text_report(r),
            "[1] objectEval(img, 'dog') — found dog (1 box)\n"
            "[0!] countEval(img, 'dog', 'x') — error: bad\n"
            "[0] textEval(img, 'shop') — did not find text 'shop' (read: '')\n"
            "score: 0.33\n");
}

TEST(Overlay, ScalesBoxesToPixels) {
  EvalReport r;
  r.prompt = "a dog";
  r.score = 1.0;
  r.results = {make_result("objectEval(img, 'dog')", 1, "found dog (1 box)",
                           {{{0.1, 0.2, 0.5, 0.6}, "dog", Role::kDetected}})};
  const std::string svg = render_overlay(r, 1000, 800);
  EXPECT_NE(svg.find("<rect x=\"100\" y=\"160\" width=\"400\" height=\"320\""), std::string::npos)
      << svg;
  EXPECT_NE(svg.find("stroke=\"#2ca02c\""), std::string::npos);
  EXPECT_NE(svg.find(">dog</text>"), std::string::npos);
  EXPECT_NE(svg.find("a dog (score 1.00)"), std::string::npos);
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_TRUE(svg.ends_with("</svg>\n"));
  EXPECT_EQ(render_overlay(r, 1000, 800), svg);
}

TEST(Overlay, CaptionOnlyWithoutAnnotations) {
  EvalReport r;
  r.prompt = "nothing <here> & 'there'";
  r.results = {make_result("objectEval(img, 'dog')", 0, "did not find dog")};
  const std::string svg = render_overlay(r, 64, 48);
  EXPECT_EQ(svg.find("<rect"), std::string::npos);
  EXPECT_NE(svg.find("nothing &lt;here&gt; &amp; &apos;there&apos;"), std::string::npos);
  EXPECT_THROW(render_overlay(r, 0, 48), Error);
  EXPECT_THROW(render_overlay(r, 64, -1), Error);
}

TEST(Overlay, PixelBoxesWithinOneFormattingDecimal) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 4000);
  const std::regex rect(R"re(<rect x="([-0-9.]+)" y="([-0-9.]+)" width="([-0-9.]+)" height="([-0-9.]+)")re");
  for (int t = 0; t < 300; ++t) {
    double x1 = u(rng), x2 = u(rng), y1 = u(rng), y2 = u(rng);
    if (x2 < x1) std::swap(x1, x2);
    if (y2 < y1) std::swap(y1, y2);
    const int w = dim(rng), h = dim(rng);
    EvalReport r;
    r.results = {make_result("objectEval(img, 'a')", 1, "found a (1 box)",
                             {{{x1, y1, x2, y2}, "a", Role::kSubject}})};
    const std::string svg = render_overlay(r, w, h);
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, rect));
    ASSERT_NEAR(std::stod(m[1]), x1 * w, 0.05 + 1e-9);
    ASSERT_NEAR(std::stod(m[2]), y1 * h, 0.05 + 1e-9);
    ASSERT_NEAR(std::stod(m[3]), (x2 - x1) * w, 0.05 + 1e-6);
    ASSERT_NEAR(std::stod(m[4]), (y2 - y1) * h, 0.05 + 1e-6);
  }
}

TEST(Overlay, RoleColorsAreDistinct) {
  const std::vector<std::string_view> colors = {role_color(Role::kSubject), role_color(Role::kReference),
                                                role_color(Role::kDetected), role_color(Role::kOcr)};
  for (std::size_t i = 0; i < colors.size(); ++i) {
    for (std::size_t j = i + 1; j < colors.size(); ++j) EXPECT_NE(colors[i], colors[j]);
  }
}

TEST(Summarize, MeanTimesHundred) {
  const std::vector<EvalReport> reports = {tagged(1, "count"), tagged(1, "count"), tagged(0, "count"),
                                           tagged(0, "count"), tagged(1, "object"), tagged(1, "object")};
  const SummaryTable t = summarize(reports, GroupBy::kSkill);
  EXPECT_EQ(t.rows, (std::vector<std::string>{"all"}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"object", "count"}));
  EXPECT_DOUBLE_EQ(t.values.at("all").at("count"), 50.0);
  EXPECT_DOUBLE_EQ(t.values.at("all").at("object"), 100.0);
  EXPECT_DOUBLE_EQ(t.average.at("all"), 75.0);
}

TEST(Summarize, ByModelAndMissingTags) {
  const std::vector<EvalReport> reports = {tagged(1, "object", "m1"), tagged(0, "object", "m2"),
                                           tagged(1, "text", "m2")};
  const SummaryTable t = summarize(reports, GroupBy::kModel);
  EXPECT_EQ(t.rows, (std::vector<std::string>{"m1", "m2"}));
  EXPECT_DOUBLE_EQ(t.values.at("m2").at("text"), 100.0);
  EXPECT_FALSE(t.values.at("m1").contains("text"));
  EXPECT_THROW(summarize({tagged(1, "object")}, GroupBy::kModel), Error);
  EXPECT_THROW(summarize({tagged(1, "")}, GroupBy::kSkill), Error);
}

TEST(Summarize, RowAverageMatchesReferenceRow) {
  EXPECT_EQ(format_number(row_average({97, 47, 23, 11, 9}), 1), "37.4");
  EXPECT_THROW(row_average({}), Error);
}

TEST(Summarize, PermutationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> bit(0, 1);
  const std::vector<std::string> skills = {"object", "count", "spatial", "scale", "text"};
  std::vector<EvalReport> reports;
  for (int i = 0; i < 200; ++i) {
    reports.push_back(tagged(bit(rng) * 0.5 + bit(rng) * 0.5, skills[i % 5], i % 3 ? "a" : "b"));
  }
  const std::string base = render_table_csv(summarize(reports, GroupBy::kModel));
  for (int t = 0; t < 20; ++t) {
    std::shuffle(reports.begin(), reports.end(), rng);
    ASSERT_EQ(render_table_csv(summarize(reports, GroupBy::kModel)), base);
  }
}

TEST(Tables, TextAndCsvRendering) {
  const std::vector<EvalReport> reports = {tagged(1, "object", "m1"), tagged(0, "count", "m1")};
  const SummaryTable t = summarize(reports, GroupBy::kModel);
  EXPECT_EQ(render_table_csv(t), "group,object,count,average\nm1,100.0,0.0,50.0\n");
  const std::string text = render_table_text(t);
  EXPECT_NE(text.find("group"), std::string::npos);
  EXPECT_NE(text.find("average"), std::string::npos);
  EXPECT_NE(text.find("100.0"), std::string::npos);
}

TEST(FormatNumber, TrimsZeros) {
  EXPECT_EQ(format_number(100.0, 1), "100");
  EXPECT_EQ(format_number(160.04, 1), "160");
  EXPECT_EQ(format_number(2.25, 1), "2.2");
  EXPECT_EQ(format_number(-0.01, 1), "0");
  EXPECT_EQ(format_number(40.6, 1), "40.6");
}

}  // namespace
}  // namespace vpe::report
