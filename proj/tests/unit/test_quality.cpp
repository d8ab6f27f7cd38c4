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


#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "mixsynth/error.hpp"
#include "mixsynth/quality.hpp"
#include "test_support.hpp"

using namespace mixsynth;

namespace {

constexpr Dimension kAll[] = {Dimension::kClarity,   Dimension::kCompleteness, Dimension::kFormatting,
                              Dimension::kRelevance, Dimension::kSolvability,  Dimension::kLogicalFlow};

std::string verdict_text(unsigned mask) {
  std::string out;
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    out += std::string(dimension_label(kAll[d])) + ": " + ((mask >> d) & 1u ? "PASS" : "FAIL") + "\n";
  }
  return out + "Rationale: scripted.\n";
}

SynthesizedQuestion unverified(const std::string& id, const std::string& text) {
  SynthesizedQuestion q;
  q.id = id;
  q.question = text;
  q.category = Category::kHybrid;
  q.nominal_difficulty = 5;
  return q;
}

}  // namespace

TEST_CASE("all 64 rubric outcomes: overall passes only when every dimension passes") {
  for (unsigned mask = 0; mask < 64; ++mask) {
    auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({verdict_text(mask)}));
    ChatProvider p(testing::fast_config(), transport);
    auto q = unverified("q", "How many legs do 3 spiders have?");
    const auto v = verify_question(q, p);
    for (std::size_t d = 0; d < kDimensionCount; ++d) CHECK(v.passes(kAll[d]) == (((mask >> d) & 1u) != 0));
    CHECK(v.overall == (mask == 63));
    CHECK(q.status == (mask == 63 ? QuestionStatus::kVerified : QuestionStatus::kRejected));
    CHECK(!v.structural);
    CHECK(transport->calls() == 1);
  }
}

TEST_CASE("verdict parsing tolerates numbering, emphasis and case") {
  const std::string text =
      "1. **Clarity**: pass\n2) Completeness - PASS\n- *Formatting*: Pass\n"
      "#### Relevance: PASS\n5. solvability: PASS\n6. **Logical Flow**: **FAIL**\nRationale: the steps jump.";
  const auto v = parse_verdict(text, "x");
  CHECK(v.passes(Dimension::kClarity));
  CHECK(v.passes(Dimension::kSolvability));
  CHECK(!v.passes(Dimension::kLogicalFlow));
  CHECK(!v.overall);
  CHECK(v.rationale == "the steps jump.");
  CHECK_THROWS_AS(parse_verdict("Clarity: PASS\nCompleteness: PASS", "x"), Error);
}

TEST_CASE("an unparseable verifier reply leaves the question unverified") {
  auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({"I cannot decide."}));
  ChatProvider p(testing::fast_config(), transport);
  std::vector<SynthesizedQuestion> qs = {unverified("a", "What is 6 times 7?")};
  const auto run = verify_all(qs, p);
  CHECK(run.verdicts.empty());
  REQUIRE(run.failures.size() == 1);
  CHECK(run.failures[0].first == "a");
  CHECK(qs[0].status == QuestionStatus::kUnverified);
}

TEST_CASE("structural rejects never reach the provider") {
  auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({verdict_text(63)}));
  ChatProvider p(testing::fast_config(), transport);
  std::vector<SynthesizedQuestion> qs = {unverified("empty", "   "),
                                         unverified("ref", "Use the result of Problem 1 to continue."),
                                         unverified("mc", "Which is prime? (A) 4 (B) 5 (C) 6")};
  const auto run = verify_all(qs, p);
  CHECK(transport->calls() == 0);
  REQUIRE(run.verdicts.size() == 3);
  for (const auto& v : run.verdicts) {
    CHECK(v.structural);
    CHECK(!v.overall);
  }
  for (const auto& q : qs) CHECK(q.status == QuestionStatus::kRejected);
  CHECK(structural_check("A fair question?") == std::nullopt);
}

TEST_CASE("verify_all skips items that are already decided") {
  auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({verdict_text(63)}));
  ChatProvider p(testing::fast_config(), transport);
  auto done = unverified("done", "Q1?");
  done.status = QuestionStatus::kVerified;
  std::vector<SynthesizedQuestion> qs = {done, unverified("todo", "Q2?")};
  const auto run = verify_all(qs, p);
  CHECK(run.verdicts.size() == 1);
  CHECK(transport->calls() == 1);
}

TEST_CASE("review sample sizes round half away from zero") {
  const std::map<std::size_t, std::size_t> expected = {{7, 1}, {100, 10}, {1000, 100}, {5, 1}, {15, 2}, {4, 0}};
  for (const auto& [n, size] : expected) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("q" + std::to_string(i));
    const auto batch = sample_for_review(ids, 0.10, 42);
    CHECK(batch.items.size() == size);
    CHECK(batch.population == n);
    CHECK(std::set<std::string>(batch.items.begin(), batch.items.end()).size() == size);
    CHECK(sample_for_review(ids, 0.10, 42).items == batch.items);
  }
  CHECK_THROWS_AS(sample_for_review({"a"}, 0.0, 1), Error);
  CHECK_THROWS_AS(sample_for_review({"a"}, 1.5, 1), Error);
}

TEST_CASE("review sampling is uniform over the population") {
  std::vector<std::string> ids;
  for (int i = 0; i < 20; ++i) ids.push_back("q" + std::to_string(i));
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    for (const auto& id : sample_for_review(ids, 0.25, static_cast<std::uint64_t>(s)).items) ++hits[id];
  }
  // Each id appears with probability 5/20; a 5-sigma band around 1000.
  for (const auto& id : ids) {
    CHECK(hits[id] > 1000 - 5 * 27);
    CHECK(hits[id] < 1000 + 5 * 27);
  }
}

TEST_CASE("bounded draws stay in range and cover it") {
  std::mt19937_64 rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto x = bounded_draw(6, rng);
    REQUIRE(x <= 6);
    ++counts[x];
  }
  for (int c : counts) {
    CHECK(c > 10000 - 5 * 93);
    CHECK(c < 10000 + 5 * 93);
  }
  CHECK(bounded_draw(0, rng) == 0);
}

TEST_CASE("review export, annotation and import") {
  testing::TempDir dir;
  std::vector<SynthesizedQuestion> qs;
  for (int i = 0; i < 30; ++i) {
    auto q = unverified("q" + std::to_string(i), "Question " + std::to_string(i) + "?");
    q.status = QuestionStatus::kVerified;
    qs.push_back(q);
  }
  std::vector<std::string> ids;
  for (const auto& q : qs) ids.push_back(q.id);
  const auto batch = sample_for_review(ids, 0.10, 7);
  export_review_batch(batch, qs, dir / "batch.jsonl");

  auto lines = read_jsonl(dir / "batch.jsonl");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].at("header").at("algorithm") == kReviewSamplerId);
  lines[1]["verdict"] = "reject";
  lines[1]["note"] = "ambiguous units";
  lines[2]["verdict"] = "accept";
  write_jsonl(dir / "batch.jsonl", lines);

  const auto back = import_review_batch(dir / "batch.jsonl");
  CHECK(back.items == batch.items);
  CHECK(back.verdicts.size() == 2);
  apply_review(back, qs);
  std::size_t rejected = 0;
  for (const auto& q : qs) {
    if (q.status == QuestionStatus::kRejected) {
      ++rejected;
      CHECK(q.id == batch.items[0]);
    }
  }
  CHECK(rejected == 1);

  lines[3]["verdict"] = "maybe";
  write_jsonl(dir / "batch.jsonl", lines);
  CHECK_THROWS_AS(import_review_batch(dir / "batch.jsonl"), Error);

  ReviewBatch unknown;
  unknown.verdicts["ghost"] = ReviewVerdict{ReviewDecision::kReject, ""};
  CHECK_THROWS_AS(apply_review(unknown, qs), Error);
  write_text(dir / "nohdr.jsonl", "{\"question_id\":\"q1\"}\n");
  CHECK_THROWS_AS(import_review_batch(dir / "nohdr.jsonl"), Error);
}
