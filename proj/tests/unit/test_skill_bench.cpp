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

#include <set>

#include "test_support.hpp"
#include "vpe/error.hpp"
#include "vpe/relations.hpp"
#include "vpe/skill_bench.hpp"
#include "vpe/text.hpp"

namespace vpe::bench {
namespace {

const Corpus& corpus0() {
  static const Corpus c = generate_corpus(Vocab::bundled(), 0);
  return c;
}

TEST(Vocab, BundledShape) {
  const Vocab v = Vocab::bundled();
  EXPECT_EQ(v.objects.size(), 80u);
  EXPECT_EQ(v.words.size(), 31u);
  EXPECT_EQ(v.counts, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(v.spatial_relations.size(), 6u);
  EXPECT_EQ(v.scale_relations.size(), 3u);
  EXPECT_NO_THROW(v.check());
}

TEST(Vocab, CheckRejectsBadVocab) {
  Vocab v = Vocab::bundled();
  v.objects.pop_back();
  EXPECT_THROW(v.check(), Error);
  v = Vocab::bundled();
  v.words[0] = "Shop";
  EXPECT_THROW(v.check(), Error);
  v = Vocab::bundled();
  v.objects[1] = v.objects[0];
  EXPECT_THROW(v.check(), Error);
  EXPECT_THROW(generate_corpus(Vocab{}, 0), Error);
}

TEST(Templates, Counts) {
  EXPECT_EQ(templates(Skill::kObject).size(), 5u);
  EXPECT_EQ(templates(Skill::kCount).size(), 8u);
  EXPECT_EQ(templates(Skill::kText).size(), 13u);
}

TEST(Corpus, SizesMatchExpectedCounts) {
  const auto& c = corpus0();
  EXPECT_EQ(c.at(Skill::kObject).size(), 400u);
  EXPECT_EQ(c.at(Skill::kCount).size(), 1000u);
  EXPECT_EQ(c.at(Skill::kSpatial).size(), 1000u);
  EXPECT_EQ(c.at(Skill::kScale).size(), 1000u);
  EXPECT_EQ(c.at(Skill::kText).size(), 403u);
}

TEST(Corpus, DeterministicPerSeed) {
  const Corpus again = generate_corpus(Vocab::bundled(), 0);
  EXPECT_EQ(to_jsonl(again), to_jsonl(corpus0()));
  const Corpus other = generate_corpus(Vocab::bundled(), 1);
  EXPECT_NE(to_jsonl(other, Skill::kSpatial), to_jsonl(corpus0(), Skill::kSpatial));
  // Exhaustive skills do not depend on the seed.
  EXPECT_EQ(to_jsonl(other, Skill::kText), to_jsonl(corpus0(), Skill::kText));
}

TEST(Corpus, PairSkillsNeverRelateAnObjectToItself) {
  for (const Skill s : {Skill::kSpatial, Skill::kScale}) {
    for (const auto& p : corpus0().at(s)) ASSERT_NE(p.slots.at("objA"), p.slots.at("objB"));
  }
}

TEST(Corpus, NoDuplicatesAndUniqueIds) {
  std::set<std::string> ids;
  for (const auto& [skill, prompts] : corpus0()) {
    std::set<std::pair<Slots, int>> tuples;
    for (const auto& p : prompts) {
      ASSERT_TRUE(tuples.insert({p.slots, p.template_index}).second) << p.prompt;
      ASSERT_TRUE(ids.insert(p.id).second) << p.id;
    }
  }
  EXPECT_EQ(ids.size(), 3803u);
}

TEST(Corpus, ProgramsParseValidateAndUseSlots) {
  for (const auto& [skill, prompts] : corpus0()) {
    for (const auto& p : prompts) {
      ASSERT_EQ(p.prompt.find('<'), std::string::npos) << p.prompt;
      ASSERT_EQ(p.prompt.find('>'), std::string::npos) << p.prompt;
      const auto text = dsl::print_program(p.program);
      const auto parsed = dsl::parse_program(text);
      ASSERT_EQ(parsed, p.program);
      ASSERT_TRUE(dsl::validate_semantics(parsed).empty()) << text;
      ASSERT_EQ(p.program, pair_program(skill, p.slots));
      for (const auto& [key, value] : p.slots) {
        if (key == "N") continue;
        ASSERT_NE(text.find("'" + value + "'"), std::string::npos) << text;
      }
    }
  }
}

TEST(Corpus, SampledMarginalsAreNearUniform) {
  for (const auto& [skill, key, rel_key] :
       std::vector<std::tuple<Skill, std::string, std::string>>{
           {Skill::kCount, "objA", "N"}, {Skill::kSpatial, "objB", "rel"}, {Skill::kScale, "objB", "scale"}}) {
    std::map<std::string, int> subjects;
    std::map<std::string, int> relations;
    for (const auto& p : corpus0().at(skill)) {
      ++subjects[p.slots.at(key)];
      ++relations[p.slots.at(rel_key)];
    }
    EXPECT_EQ(subjects.size(), 80u);
    int lo = 1 << 30, hi = 0;
    for (const auto& [k, n] : subjects) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    EXPECT_LE(hi - lo, 1) << skill_name(skill);
    lo = 1 << 30;
    hi = 0;
    for (const auto& [k, n] : relations) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    EXPECT_LE(hi - lo, static_cast<int>(subjects.size())) << skill_name(skill);
  }
}

TEST(Corpus, ArticlesFollowVowelRuleForAllObjects) {
  for (const auto& obj : Vocab::bundled().objects) {
    const bool vowel = std::string_view("aeiou").find(obj[0]) != std::string_view::npos;
    EXPECT_EQ(article(obj), vowel ? "an" : "a") << obj;
  }
  for (const auto& p : corpus0().at(Skill::kObject)) {
    for (const char* v : {"a a", "a e", "a i", "a o", "a u"}) {
      ASSERT_EQ((" " + p.prompt).find(std::string(" ") + v), std::string::npos) << p.prompt;
    }
  }
}

TEST(FillTemplate, Examples) {
  EXPECT_EQ(fill_template(templates(Skill::kObject)[1], {{"objA", "apple"}}), "an apple");
  EXPECT_EQ(fill_template(templates(Skill::kObject)[2], {{"objA", "dog"}}), "a photo of a dog");
  EXPECT_EQ(fill_template("a photo of <N> <objA><s>", {{"objA", "dog"}, {"N", "3"}}), "a photo of 3 dogs");
  EXPECT_EQ(fill_template("a photo of <N EN> <objA><s>", {{"objA", "dog"}, {"N", "3"}}),
            "a photo of three dogs");
  EXPECT_EQ(fill_template("<N EN> <objA><s>", {{"objA", "cat"}, {"N", "1"}}), "one cat");
  EXPECT_EQ(fill_template("<N> <objA><s>", {{"objA", "person"}, {"N", "2"}}), "2 people");
  EXPECT_EQ(fill_template("<N> <objA><s>", {{"objA", "scissors"}, {"N", "4"}}), "4 scissors");
  EXPECT_EQ(fill_template("<N> <objA><s>", {{"objA", "bus"}, {"N", "2"}}), "2 buses");
  EXPECT_EQ(fill_template("a poster that reads '<text>'", {{"text", "shop"}}),
            "a poster that reads 'shop'");
}

TEST(FillTemplate, SpatialConnectors) {
  const std::string& t = templates(Skill::kSpatial)[0];
  const auto fill = [&](const std::string& rel) {
    return fill_template(t, {{"objA", "potted plant"}, {"objB", "spoon"}, {"rel", rel}});
  };
  EXPECT_EQ(fill("front"), "a spoon is in front of a potted plant");
  EXPECT_EQ(fill("behind"), "a spoon is behind a potted plant");
  EXPECT_EQ(fill("left"), "a spoon is to the left of a potted plant");
  EXPECT_EQ(fill("right"), "a spoon is to the right of a potted plant");
  EXPECT_EQ(fill("above"), "a spoon is above a potted plant");
  EXPECT_EQ(fill("below"), "a spoon is below a potted plant");
}

TEST(FillTemplate, ScaleConnectors) {
  const std::string& t = templates(Skill::kScale)[0];
  const auto fill = [&](const std::string& scale) {
    return fill_template(t, {{"objA", "sports ball"}, {"objB", "laptop"}, {"scale", scale}});
  };
  EXPECT_EQ(fill("bigger"), "a laptop that is bigger than a sports ball");
  EXPECT_EQ(fill("smaller"), "a laptop that is smaller than a sports ball");
  EXPECT_EQ(fill("same"), "a laptop that is the same size as a sports ball");
}

TEST(FillTemplate, Errors) {
  EXPECT_THROW(fill_template("<objA>", {}), Error);
  EXPECT_THROW(fill_template("<bogus>", {{"objA", "dog"}}), Error);
  EXPECT_THROW(fill_template("<objA", {{"objA", "dog"}}), Error);
}

TEST(PairProgram, Examples) {
  EXPECT_EQ(dsl::print_program(pair_program(Skill::kCount, {{"objA", "dog"}, {"N", "3"}})),
            "countEval(img, 'dog', '==3')");
  EXPECT_EQ(dsl::print_program(pair_program(Skill::kText, {{"text", "shop"}})), "textEval(img, 'shop')");
  EXPECT_EQ(dsl::print_program(pair_program(Skill::kObject, {{"objA", "dog"}})), "objectEval(img, 'dog')");
  EXPECT_EQ(dsl::print_program(pair_program(
                Skill::kSpatial, {{"objA", "potted plant"}, {"objB", "spoon"}, {"rel", "front"}})),
            "spatialEval(img, 'spoon', 'potted plant', 'front')");
  EXPECT_EQ(dsl::print_program(pair_program(
                Skill::kScale, {{"objA", "sports ball"}, {"objB", "laptop"}, {"scale", "bigger"}})),
            "scaleEval(img, 'laptop', 'sports ball', 'bigger')");
}

TEST(Ids, StableAcrossCalls) {
  const Slots s = {{"objA", "dog"}};
  EXPECT_EQ(prompt_id(Skill::kObject, s, 1), prompt_id(Skill::kObject, s, 1));
  EXPECT_NE(prompt_id(Skill::kObject, s, 1), prompt_id(Skill::kObject, s, 2));
  EXPECT_TRUE(prompt_id(Skill::kObject, s, 1).starts_with("object-"));
}

TEST(Jsonl, LineShapeAndReload) {
  const std::string text = to_jsonl(corpus0(), Skill::kCount);
  const auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  for (const char* key : {"id", "skill", "prompt", "slots", "program"}) {
    EXPECT_TRUE(first.contains(key)) << key;
  }
  EXPECT_EQ(first["skill"], "count");

  testing::TempDir dir;
  const auto path = dir.write("corpus.jsonl", to_jsonl(corpus0()));
  const auto loaded = load_jsonl(path);
  ASSERT_EQ(loaded.size(), 3803u);
  std::size_t i = 0;
  for (const Skill s : kAllSkills) {
    for (const auto& p : corpus0().at(s)) {
      const auto& q = loaded[i++];
      ASSERT_EQ(q.id, p.id);
      ASSERT_EQ(q.prompt, p.prompt);
      ASSERT_EQ(q.slots, p.slots);
      ASSERT_EQ(q.program, p.program);
      ASSERT_EQ(q.skill, p.skill);
    }
  }
}

TEST(Jsonl, BadLinesReportTheirLine) {
  testing::TempDir dir;
  const auto path = dir.write(
      "bad.jsonl", "{\"id\":\"a\",\"prompt\":\"p\",\"program\":\"objectEval(img, 'x')\"}\n{oops\n");
  try {
    load_jsonl(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_jsonl(dir.path() / "absent.jsonl"), Error);
}

TEST(SkillNames, RoundTrip) {
  for (const Skill s : kAllSkills) EXPECT_EQ(skill_from_name(skill_name(s)), s);
  EXPECT_FALSE(skill_from_name("color").has_value());
}

}  // namespace
}  // namespace vpe::bench
