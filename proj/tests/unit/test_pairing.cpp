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
#include <tuple>

#include "doctest.h"
#include "mixsynth/error.hpp"
#include "mixsynth/pairing.hpp"
#include "test_support.hpp"

using namespace mixsynth;

namespace {

struct Fixture {
  Corpus corpus;
  EmbeddingMap embeddings;
};

// Unit vectors scattered around shared cluster centers.
Fixture clustered(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> diff(1, 5);
  std::vector<std::vector<double>> centers(n / 10 + 1, std::vector<double>(dim));
  for (auto& c : centers)
    for (auto& x : c) x = gauss(rng);
  Fixture f;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[i % centers.size()];
    std::vector<double> v(dim);
    double norm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      v[k] = c[k] + 0.35 * gauss(rng);
      norm += v[k] * v[k];
    }
    for (auto& x : v) x /= std::sqrt(norm);
    char id[16];
    std::snprintf(id, sizeof id, "q%04zu", i);
    f.corpus.problems.push_back({id, std::string("question ") + id, "a", static_cast<double>(diff(rng)), "S", Json::object()});
    f.embeddings.emplace(id, EmbeddingVector(v));
  }
  return f;
}

// Independent double loop straight from the definition of the pair set.
std::set<std::tuple<std::string, std::string>> oracle(const Fixture& f, double tau) {
  std::set<std::tuple<std::string, std::string>> out;
  const auto& ps = f.corpus.problems;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (i == j || ps[i].difficulty >= ps[j].difficulty) continue;
      const auto a = f.embeddings.at(ps[i].id).values();
      const auto b = f.embeddings.at(ps[j].id).values();
      double dot = 0, na = 0, nb = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
      }
      if (dot / std::sqrt(na * nb) > tau) out.emplace(ps[i].id, ps[j].id);
    }
  }
  return out;
}

EmbeddingVector vec(std::initializer_list<double> v) { return EmbeddingVector(std::vector<double>(v)); }

}  // namespace

TEST_CASE("cosine kernel: hand-derived value, identity, orthogonality") {
  // 32 / (sqrt(14) * sqrt(77))
  CHECK(cosine_similarity(vec({1, 2, 3}), vec({4, 5, 6})) == doctest::Approx(0.974632).epsilon(1e-6));
  CHECK(std::abs(cosine_similarity(vec({1, 2, 3}), vec({4, 5, 6})) - 32.0 / (std::sqrt(14.0) * std::sqrt(77.0))) < 1e-12);
  CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(cosine_similarity(vec({0.3, -2, 7}), vec({0.3, -2, 7})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cosine kernel properties over random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1), scale(0.01, 100);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(1 + t % 40), b(a.size());
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const double s = scale(rng);
    std::vector<double> as = a;
    for (auto& x : as) x *= s;
    const EmbeddingVector va(a), vb(b), vas(as);
    CHECK(cosine_similarity(va, vb) == cosine_similarity(vb, va));
    CHECK(std::abs(cosine_similarity(vas, vb) - cosine_similarity(va, vb)) < 1e-9);
    CHECK(std::abs(cosine_similarity(va, va) - 1.0) < 1e-9);
    const double c = cosine_similarity(va, vb);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    double n = 0;
    for (double x : a) n += x * x;
    CHECK(std::abs(va.norm() - std::sqrt(n)) <= 1e-9 * std::sqrt(n));
  }
}

TEST_CASE("embedding vectors reject empty, zero and non-finite input") {
  CHECK_THROWS_AS(EmbeddingVector(std::vector<double>{}), Error);
  CHECK_THROWS_AS(EmbeddingVector(std::vector<double>{0, 0}), Error);
  CHECK_THROWS_AS(EmbeddingVector(std::vector<double>{1, NAN}), Error);
  CHECK_THROWS_AS(cosine_similarity(vec({1, 2}), vec({1, 2, 3})), Error);
}

TEST_CASE("equal difficulties never pair; unequal parents pair low to high") {
  PairingConfig cfg;
  Corpus c{"S", {{"a", "qa", "1", 3.0, "S", Json::object()}, {"b", "qb", "2", 3.0, "S", Json::object()}}};
  EmbeddingMap e{{"a", vec({1, 0.1})}, {"b", vec({1, 0.15})}};
  CHECK(build_pairs(c, e, cfg).empty());

  c.problems[0].difficulty = 7.0;
  c.problems[1].difficulty = 4.0;
  const auto pairs = build_pairs(c, e, cfg);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].low_id == "b");
  CHECK(pairs[0].high_id == "a");
  CHECK(pairs[0].low_difficulty == 4.0);
  CHECK(pairs[0].high_difficulty == 7.0);
}

TEST_CASE("uncapped pairs equal the brute-force oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = clustered(150, 12, seed);
    PairingConfig cfg;
    cfg.tau = 0.8;
    cfg.max_pairs_per_question = 0;
    const auto pairs = build_pairs(f.corpus, f.embeddings, cfg);
    std::set<std::tuple<std::string, std::string>> got;
    for (const auto& p : pairs) got.emplace(p.low_id, p.high_id);
    const auto want = oracle(f, 0.8);
    CHECK(!want.empty());
    CHECK(got.size() == pairs.size());
    CHECK(got == want);
  }
}

TEST_CASE("pair-set invariants and determinism") {
  const auto f = clustered(120, 8, 11);
  PairingConfig cfg;
  cfg.max_pairs_per_question = 3;
  const auto a = build_pairs(f.corpus, f.embeddings, cfg);
  const auto b = build_pairs(f.corpus, f.embeddings, cfg);
  CHECK(a == b);
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a[i];
    CHECK(p.low_difficulty < p.high_difficulty);
    CHECK(p.similarity > cfg.tau);
    CHECK(seen.insert({std::min(p.low_id, p.high_id), std::max(p.low_id, p.high_id)}).second);
    if (i > 0) CHECK(std::tie(a[i - 1].low_id, a[i - 1].high_id) < std::tie(p.low_id, p.high_id));
  }
}

TEST_CASE("the cap keeps each question's best partner") {
  const auto f = clustered(100, 8, 5);
  PairingConfig uncapped;
  uncapped.max_pairs_per_question = 0;
  PairingConfig capped;
  capped.max_pairs_per_question = 1;
  const auto all = build_pairs(f.corpus, f.embeddings, uncapped);
  const auto kept = build_pairs(f.corpus, f.embeddings, capped);
  CHECK(kept.size() <= all.size());
  for (const auto& p : f.corpus.problems) {
    CHECK(select_generation_pair(p.id, all) == select_generation_pair(p.id, kept));
  }
}

TEST_CASE("generation pair selection: maximum similarity, ties to the smaller partner id") {
  std::vector<QuestionPair> pairs = {
      {"a", "q", 1, 5, 0.81}, {"q", "z", 2, 6, 0.88}, {"b", "q", 1, 5, 0.88}, {"c", "d", 1, 2, 0.99}};
  const auto best = select_generation_pair("q", pairs);
  REQUIRE(best);
  CHECK(best->partner_of("q") == "b");
  CHECK(select_generation_pair("a", pairs)->partner_of("a") == "q");
  CHECK(!select_generation_pair("nobody", pairs));
  pairs.erase(pairs.begin() + 1, pairs.end());
  CHECK(select_generation_pair("q", pairs)->similarity == 0.81);
}

TEST_CASE("tau validation and recommended band") {
  PairingConfig cfg;
  for (double bad : {0.0, 1.0, -0.2, 1.5}) {
    cfg.tau = bad;
    CHECK_THROWS_AS(validate_pairing_config(cfg), Error);
  }
  CHECK(!tau_band_warning(0.8));
  CHECK(!tau_band_warning(0.75));
  CHECK(!tau_band_warning(0.9));
  CHECK(tau_band_warning(0.6));
  CHECK(tau_band_warning(0.95));
}

TEST_CASE("missing embeddings are a precondition error") {
  Corpus c{"S", {{"a", "qa", "1", 1.0, "S", Json::object()}, {"b", "qb", "2", 2.0, "S", Json::object()}}};
  EmbeddingMap e{{"a", vec({1, 0})}};
  CHECK_THROWS_AS(build_pairs(c, e, PairingConfig{}), Error);
}

TEST_CASE("pair files round-trip and reject unknown ids") {
  testing::TempDir dir;
  Corpus c{"S", {{"a", "qa", "1", 1.0, "S", Json::object()}, {"b", "qb", "2", 2.0, "S", Json::object()}}};
  const std::vector<QuestionPair> pairs = {{"a", "b", 1.0, 2.0, 0.9}};
  save_pairs(pairs, dir / "p.jsonl");
  CHECK(load_pairs(dir / "p.jsonl", c) == pairs);
  write_text(dir / "bad.jsonl", "{\"low_id\":\"a\",\"high_id\":\"zz\",\"similarity\":0.9}\n");
  CHECK_THROWS_AS(load_pairs(dir / "bad.jsonl", c), Error);
}
