//
// Copyright 2026 The mixsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "mixsynth/error.hpp"
#include "mixsynth/mock.hpp"
#include "mixsynth/pairing.hpp"
#include "mixsynth/prompts.hpp"
#include "mixsynth/synthesis.hpp"
#include "test_support.hpp"

using namespace mixsynth;

namespace {

Corpus two_seed_corpus() {
  return Corpus{"S",
                {{"lo", "What is 2 + 3?", "5", 4.0, "S", Json::object()},
                 {"hi", "Solve x^2 = 49 for positive x.", "7", 7.0, "S", Json::object()}}};
}

}  // namespace

TEST_CASE("nominal difficulty for the worked pair (7, 4)") {
  CHECK(nominal_difficulty(Category::kHybrid, 4.0, 7.0) == 8.0);
  CHECK(nominal_difficulty(Category::kDecomposed, 4.0, 7.0) == 5.0);
  DifficultyFormula mean;
  mean.decomposed = DifficultyFormula::DecomposedRule::kMean;
  CHECK(nominal_difficulty(Category::kDecomposed, 4.0, 7.0, mean) == 5.5);
  CHECK_THROWS_AS(nominal_difficulty(Category::kHybrid, 5.0, 5.0), Error);
  CHECK_THROWS_AS(nominal_difficulty(Category::kOriginal, 1.0, 2.0), Error);
}

TEST_CASE("nominal difficulty ordering holds for random parents") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 2000; ++t) {
    double a = std::round(u(rng) * 2) / 2, b = std::round(u(rng) * 2) / 2;
    if (a == b) continue;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double dec = nominal_difficulty(Category::kDecomposed, lo, hi);
    const double hyb = nominal_difficulty(Category::kHybrid, lo, hi);
    CHECK(dec >= lo);
    CHECK(dec <= hi);
    CHECK(dec == std::clamp(std::floor((lo + hi) / 2), lo, hi));
    CHECK(hyb > hi);
    CHECK(dec < hyb);
  }
}

TEST_CASE("category and status names round-trip") {
  for (Category c : {Category::kDecomposed, Category::kOriginal, Category::kHybrid}) {
    CHECK(category_from_name(category_name(c)) == c);
  }
  for (QuestionStatus s : {QuestionStatus::kUnverified, QuestionStatus::kVerified, QuestionStatus::kRejected}) {
    CHECK(status_from_name(status_name(s)) == s);
  }
  CHECK_THROWS_AS(category_from_name("mixed"), Error);
}

TEST_CASE("prompts put the harder parent first") {
  const auto c = two_seed_corpus();
  const auto p = render_prompt(Category::kHybrid, c.problems[0], c.problems[1]);
  CHECK(p.rfind(std::string(prompts::kHybridInstructions), 0) == 0);
  const auto p1 = p.find("#Problem 1#:\nSolve x^2 = 49 for positive x.\nAnswer 1: 7\nDifficulty 1: 7");
  const auto p2 = p.find("#Problem 2#:\nWhat is 2 + 3?\nAnswer 2: 5\nDifficulty 2: 4");
  CHECK(p1 != std::string::npos);
  CHECK(p2 != std::string::npos);
  CHECK(p1 < p2);
  const auto d = render_prompt(Category::kDecomposed, QuestionPair{"lo", "hi", 4, 7, 0.9}, c);
  CHECK(d.rfind(std::string(prompts::kDecomposedInstructions), 0) == 0);
  CHECK_THROWS_AS(render_prompt(Category::kOriginal, c.problems[0], c.problems[1]), Error);
}

TEST_CASE("generation parsing") {
  CHECK(parse_generation("#Core Elements#: x\n#New Problem#:\n  A train leaves.  \n", Category::kHybrid) ==
        "A train leaves.");
  CHECK(parse_generation("#New Problem#: first\n#New Problem#: second", Category::kHybrid) == "second");
  for (const char* bad : {"no header here", "#New Problem#:   \n", "#New Problem#: Q\n#Explanation#: because",
                          "#New Problem#: Combine Problem 1 with the rest", "#New Problem#: Pick (A) 1 (B) 2"}) {
    CHECK_THROWS_AS(parse_generation(bad, Category::kDecomposed), Error);
  }
  CHECK(has_multiple_choice_markers("(A) one (C) three"));
  CHECK(!has_multiple_choice_markers("(A) only, twice (A)"));
  CHECK(mentions_source_problems("see Problem 2"));
}

TEST_CASE("question records round-trip") {
  testing::TempDir dir;
  SynthesizedQuestion q{"hyb-x", "Q?", Category::kHybrid, 8.0, "lo", "hi", "raw", QuestionStatus::kVerified};
  save_questions({q}, dir / "q.jsonl");
  const auto back = load_questions(dir / "q.jsonl");
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == q.id);
  CHECK(back[0].category == q.category);
  CHECK(back[0].nominal_difficulty == 8.0);
  CHECK(back[0].parent_high_id == "hi");
  CHECK(back[0].status == QuestionStatus::kVerified);
}

TEST_CASE("synthesis with the mock yields one question per paired seed") {
  const auto c = two_seed_corpus();
  const std::vector<QuestionPair> pairs = {{"lo", "hi", 4.0, 7.0, 0.9}};
  ChatProvider gen(testing::fast_config("mock-generator"), make_mock_chat_transport(Role::kGenerator, 0));
  for (Category tmpl : {Category::kHybrid, Category::kDecomposed}) {
    const auto r = synthesize_category(c, pairs, tmpl, gen);
    REQUIRE(r.questions.size() == 2);
    CHECK(r.skips.empty());
    CHECK(r.questions[0].id == synthesized_id(tmpl, "hi"));
    CHECK(r.questions[1].id == synthesized_id(tmpl, "lo"));
    // Both seeds share the pair yet receive distinct samples.
    CHECK(r.questions[0].question != r.questions[1].question);
    for (const auto& q : r.questions) {
      CHECK(q.parent_low_id == "lo");
      CHECK(q.parent_high_id == "hi");
      CHECK(q.nominal_difficulty == (tmpl == Category::kHybrid ? 8.0 : 5.0));
      CHECK(q.status == QuestionStatus::kUnverified);
    }
  }
}

TEST_CASE("unpaired seeds are skipped and parse failures retried then reported") {
  Corpus c = two_seed_corpus();
  c.problems.push_back({"solo", "Name a prime.", "2", 1.0, "S", Json::object()});
  const std::vector<QuestionPair> pairs = {{"lo", "hi", 4.0, 7.0, 0.9}};
  auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({"garbage"}));
  ChatProvider gen(testing::fast_config(), transport);
  SynthesisConfig cfg;
  cfg.parse_retries = 1;
  const auto r = synthesize_category(c, pairs, Category::kHybrid, gen, cfg);
  CHECK(r.questions.empty());
  CHECK(r.skips.size() == 3);
  CHECK(r.failures == 2);
  CHECK(transport->calls() == 4);
  std::set<std::string> skipped;
  for (const auto& s : r.skips) skipped.insert(s.seed_id);
  CHECK(skipped == std::set<std::string>{"hi", "lo", "solo"});
}

TEST_CASE("a retry recovers a malformed first answer") {
  const auto c = two_seed_corpus();
  const std::vector<QuestionPair> pairs = {{"lo", "hi", 4.0, 7.0, 0.9}};
  auto transport = std::make_shared<testing::ScriptedTransport>(
      testing::chat_script({"oops", "oops", "#New Problem#:\nRecovered question?"}));
  auto cfg = testing::fast_config();
  cfg.max_in_flight = 1;
  ChatProvider gen(cfg, transport);
  const auto r = synthesize_category(c, pairs, Category::kDecomposed, gen);
  CHECK(r.questions.size() == 2);
  CHECK(r.failures == 0);
}
