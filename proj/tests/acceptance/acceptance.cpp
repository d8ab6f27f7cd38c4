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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mixsynth/curriculum.hpp"
#include "mixsynth/error.hpp"
#include "mixsynth/pairing.hpp"
#include "mixsynth/providers.hpp"
#include "mixsynth/quality.hpp"
#include "mixsynth/solver.hpp"
#include "mixsynth/synthesis.hpp"
#include "mixsynth/util.hpp"
#include "test_support.hpp"

using namespace mixsynth;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("AC%d %s: %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(dim);
  double n = 0;
  for (auto& x : v) {
    x = g(rng);
    n += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

template <typename F>
void criterion(int n, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

void ac1_pair_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  // Random unit vectors in four dimensions.
  const std::size_t dim = 4;
  Corpus c{"AC1", {}};
  EmbeddingMap emb;
  std::vector<std::vector<double>> raw;
  std::uniform_int_distribution<int> diff(1, 5);
  for (int i = 0; i < 200; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "p%03d", i);
    c.problems.push_back({id, std::string("question ") + id, "0", double(diff(rng)), "AC1", Json::object()});
    raw.push_back(random_unit(rng, dim));
    emb.emplace(id, EmbeddingVector(raw.back()));
  }
  PairingConfig cfg;
  cfg.tau = 0.8;
  cfg.max_pairs_per_question = 0;
  std::set<std::pair<std::string, std::string>> got, want;
  for (const auto& p : build_pairs(c, emb, cfg)) got.emplace(p.low_id, p.high_id);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = 0; j < raw.size(); ++j) {
      if (c.problems[i].difficulty >= c.problems[j].difficulty) continue;
      double dot = 0, ni = 0, nj = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot += raw[i][k] * raw[j][k];
        ni += raw[i][k] * raw[i][k];
        nj += raw[j][k] * raw[j][k];
      }
      if (dot / std::sqrt(ni * nj) > cfg.tau) want.emplace(c.problems[i].id, c.problems[j].id);
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << "build_pairs " << got.size() << " pairs vs oracle " << want.size() << ", " << secs << " s (limit 5 s)";
  report(1, got == want && !want.empty() && secs < 5.0, d.str());
}

void ac2_cosine() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-10, 10), s(1e-3, 1e3);
  double worst_self = 0, worst_scale = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(1 + t % 64), b(a.size());
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const double k = s(rng);
    std::vector<double> ak = a;
    for (auto& x : ak) x *= k;
    const EmbeddingVector va(a), vb(b), vak(ak);
    worst_self = std::max(worst_self, std::abs(cosine_similarity(va, va) - 1.0));
    worst_scale = std::max(worst_scale, std::abs(cosine_similarity(vak, vb) - cosine_similarity(va, vb)));
  }
  const double hand = cosine_similarity(EmbeddingVector({1, 2, 3}), EmbeddingVector({4, 5, 6}));
  std::ostringstream d;
  d.precision(10);
  d << "max |sim(v,v)-1| " << worst_self << ", max scaling drift " << worst_scale << " (tol 1e-9); sim((1,2,3),(4,5,6)) "
    << hand << " (0.974632 +- 1e-6)";
  report(2, worst_self <= 1e-9 && worst_scale <= 1e-9 && std::abs(hand - 0.974632) <= 1e-6, d.str());
}

void ac3_case_difficulty() {
  const double h = nominal_difficulty(Category::kHybrid, 4.0, 7.0);
  const double dd = nominal_difficulty(Category::kDecomposed, 4.0, 7.0);
  report(3, h == 8.0 && dd == 5.0,
         "hybrid(4.0, 7.0) = " + format_real(h) + " (8.0), decomposed(4.0, 7.0) = " + format_real(dd) + " (5.0)");
}

void ac4_table_shape(const fs::path& run_dir) {
  const std::size_t n = read_jsonl(testing::fixture("toy_seed.jsonl")).size();
  const auto stats = Json::parse(read_text(run_dir / "stats.json"));
  bool ok = true;
  std::ostringstream d;
  d << "N=" << n << ";";
  for (const char* f : {"synth/decomposed.jsonl", "synth/original.jsonl", "synth/hybrid.jsonl"}) {
    const auto k = read_jsonl(run_dir / f).size();
    ok = ok && k == n;
    d << " " << f << "=" << k;
  }
  d << "; stats rows";
  for (const auto& row : stats.at("rows")) {
    const auto k = row.at("total").get<std::size_t>();
    ok = ok && k == n;
    d << " " << k;
  }
  const auto total = stats.at("total").at("total").get<std::size_t>();
  ok = ok && stats.at("rows").size() == 3 && total == 3 * n;
  d << ", total " << total << " (expect " << 3 * n << ")";
  report(4, ok, d.str());
}

void ac5_gates() {
  const auto cases = read_jsonl(testing::fixture("gate_cases.jsonl"));
  const auto start = Clock::now();
  std::size_t agree = 0;
  std::vector<std::string> wrong;
  for (const auto& c : cases) {
    const bool pass = check_gates(c.at("text").get<std::string>(), GateConfig{}).passed();
    if (pass == c.at("expect_pass").get<bool>()) {
      ++agree;
    } else {
      wrong.push_back(c.at("name").get<std::string>());
    }
  }
  const auto s = ngram_degeneracy("x y x y x y x y", 2);
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << agree << "/" << cases.size() << " labels agree";
  for (const auto& w : wrong) d << " [" << w << "]";
  d << "; 2-gram ratio of \"x y x y x y x y\" = " << s.duplicate_ratio << " (5/7); " << secs << " s (limit 1 s)";
  report(5, cases.size() == 50 && agree == 50 && std::abs(s.duplicate_ratio - 5.0 / 7.0) < 1e-12 && secs < 1.0,
         d.str());
}

void ac6_verification() {
  const Dimension dims[] = {Dimension::kClarity,   Dimension::kCompleteness, Dimension::kFormatting,
                            Dimension::kRelevance, Dimension::kSolvability,  Dimension::kLogicalFlow};
  int agree = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::string text;
    for (std::size_t k = 0; k < 6; ++k) {
      text += std::string(dimension_label(dims[k])) + ": " + ((mask >> k) & 1u ? "PASS" : "FAIL") + "\n";
    }
    auto transport = std::make_shared<testing::ScriptedTransport>(testing::chat_script({text}));
    ChatProvider p(testing::fast_config("scripted-verifier"), transport);
    SynthesizedQuestion q;
    q.id = "q";
    q.question = "A tank holds 40 liters and drains 3 liters per minute. How long until it is empty?";
    const auto v = verify_question(q, p);
    bool all = true;
    for (std::size_t k = 0; k < 6; ++k) all = all && v.passes(dims[k]);
    if (v.overall == all && v.overall == (mask == 63)) ++agree;
  }
  auto counter = std::make_shared<testing::ScriptedTransport>(testing::chat_script({"unused"}));
  ChatProvider p(testing::fast_config("scripted-verifier"), counter);
  std::vector<SynthesizedQuestion> structural(3);
  structural[0].id = "empty";
  structural[0].question = "  ";
  structural[1].id = "ref";
  structural[1].question = "Using Problem 2, find the sum.";
  structural[2].id = "mc";
  structural[2].question = "Pick one: (A) 1 (B) 2 (C) 3";
  const auto run = verify_all(structural, p);
  bool rejected = run.verdicts.size() == 3;
  for (const auto& v : run.verdicts) rejected = rejected && v.structural && !v.overall;
  report(6, agree == 64 && counter->calls() == 0 && rejected,
         std::to_string(agree) + "/64 combinations match the conjunction; structural rejects made " +
             std::to_string(counter->calls()) + " provider calls (expect 0)");
}

void ac7_review() {
  const std::map<std::size_t, std::size_t> expected = {{7, 1}, {100, 10}, {1000, 100}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& [n, size] : expected) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
    const auto a = sample_for_review(ids, 0.10, 1234);
    const auto b = sample_for_review(ids, 0.10, 1234);
    ok = ok && a.items.size() == size && a.items == b.items;
    d << "N=" << n << " -> " << a.items.size() << (a.items == b.items ? " (repeatable) " : " (DIFFERS) ");
  }
  report(7, ok, d.str() + "expect {1, 10, 100}");
}

void ac8_curriculum() {
  std::ostringstream d;
  // Pure order with nominal levels taken from the difficulty formula.
  std::vector<GradedItem> items;
  const std::vector<std::pair<Category, double>> levels = {
      {Category::kHybrid, 8}, {Category::kOriginal, 6}, {Category::kDecomposed, 5},
      {Category::kHybrid, 9}, {Category::kOriginal, 7}, {Category::kDecomposed, 4}};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    items.push_back({"i" + std::to_string(i), "Q" + std::to_string(i) + "?", "\\boxed{1}",
                     category_label(levels[i].first), levels[i].second, std::nullopt});
  }
  const auto pure = build_pure_curriculum(items);
  bool pure_ok = pure.stages.size() == 3 && pure.stages[0].name == "decomposed" &&
                 pure.stages[1].name == "original" && pure.stages[2].name == "hybrid";
  for (std::size_t s = 1; s < pure.stages.size(); ++s) {
    pure_ok = pure_ok && pure.stages[s - 1].mean_difficulty <= pure.stages[s].mean_difficulty;
  }
  d << "pure order " << (pure_ok ? "ok" : "WRONG");

  // Blended: six categories with injected means, grouping 2.
  const std::vector<std::pair<std::string, double>> injected = {
      {"Alpha/A", 7.0}, {"Alpha/B", 2.0}, {"Alpha/C", 4.5}, {"Beta/D", 9.0}, {"Beta/E", 3.0}, {"Beta/F", 5.5}};
  std::vector<std::vector<GradedItem>> datasets(2);
  std::map<std::string, double> scores;
  for (std::size_t k = 0; k < injected.size(); ++k) {
    for (int j = 0; j < 2; ++j) {
      const auto id = injected[k].first + "-" + std::to_string(j);
      datasets[k / 3].push_back({id, "Q " + id, "S", injected[k].first, std::nullopt, std::nullopt});
      scores[id] = injected[k].second + (j ? 0.25 : -0.25);
    }
  }
  const auto blended = build_blended_curriculum(datasets, scores, BlendOptions{2, false});
  const std::vector<std::vector<std::string>> want = {{"Alpha/B", "Beta/E"}, {"Alpha/C", "Beta/F"}, {"Alpha/A", "Beta/D"}};
  bool blend_ok = blended.stages.size() == 3;
  for (std::size_t s = 0; blend_ok && s < 3; ++s) blend_ok = blended.stages[s].categories == want[s];
  d << "; blended " << blended.stages.size() << " stages " << (blend_ok ? "in ascending order" : "WRONG ORDER");

  // Partition property on randomized inputs.
  std::mt19937_64 rng(8);
  int good = 0;
  for (int t = 0; t < 1000; ++t) {
    const int ncat = 1 + int(rng() % 8), grouping = 1 + int(rng() % 3);
    std::vector<std::vector<GradedItem>> ds(1 + rng() % 3);
    std::map<std::string, double> sc;
    std::multiset<std::string> input;
    for (int c = 0; c < ncat; ++c) {
      const auto label = "D" + std::to_string(c % ds.size()) + "/C" + std::to_string(c);
      const int n = 1 + int(rng() % 4);
      for (int k = 0; k < n; ++k) {
        const auto id = label + "#" + std::to_string(k);
        ds[c % ds.size()].push_back({id, "Q", "S", label, std::nullopt, std::nullopt});
        input.insert(id);
        if (k == 0 || rng() % 2) sc[id] = 1 + double(rng() % 90) / 10;
      }
    }
    const auto plan = build_blended_curriculum(ds, sc, BlendOptions{grouping, t % 2 == 1});
    std::multiset<std::string> output;
    for (const auto& s : plan.stages)
      for (const auto& i : s.items) output.insert(i.question_id);
    if (output == input) ++good;
  }
  d << "; partition held in " << good << "/1000 trials";
  report(8, pure_ok && blend_ok && good == 1000, d.str());
}

std::string tree_digest(const fs::path& root, std::size_t* files) {
  std::vector<std::string> entries;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    const auto rel = e.path().lexically_relative(root).generic_string();
    if (rel == "logs" || rel.rfind("logs/", 0) == 0) continue;
    if (e.is_regular_file()) entries.push_back(rel + " " + sha256_hex(read_text(e.path())));
  }
  std::sort(entries.begin(), entries.end());
  *files = entries.size();
  std::string all;
  for (const auto& s : entries) all += s + "\n";
  return sha256_hex(all);
}

bool run_cli(const fs::path& out, double* secs) {
  const std::string cmd = std::string("\"") + MIXSYNTH_CLI + "\" --config \"" + testing::fixture("toy_config.ini") +
                          "\" --out \"" + out.string() + "\" --mock run-all > \"" + (out.string() + ".log") +
                          "\" 2>&1";
  const auto start = Clock::now();
  const int rc = std::system(cmd.c_str());
  *secs = seconds_since(start);
  return rc == 0;
}

struct ToyRuns {
  bool ok = false;
  double secs_a = 0, secs_b = 0;
};

ToyRuns run_toy_twice(const fs::path& a, const fs::path& b) {
  ToyRuns r;
  const bool ok_a = run_cli(a, &r.secs_a);
  const bool ok_b = run_cli(b, &r.secs_b);
  r.ok = ok_a && ok_b;
  return r;
}

void ac9_determinism(const ToyRuns& runs, const fs::path& a, const fs::path& b) {
  if (!runs.ok) {
    report(9, false, "run-all exited nonzero; see " + a.string() + ".log");
    return;
  }
  std::size_t fa = 0, fb = 0;
  const auto da = tree_digest(a, &fa), db = tree_digest(b, &fb);
  std::ostringstream d;
  d << "run-all --mock took " << runs.secs_a << " s and " << runs.secs_b << " s (limit 60 s); " << fa
    << " files, trees " << (da == db ? "byte-identical" : "DIFFER") << " (logs/ excluded)";
  report(9, da == db && fa == fb && fa > 0 && runs.secs_a < 60 && runs.secs_b < 60, d.str());
}

void ac10_provider() {
  using namespace std::chrono_literals;
  auto transport = std::make_shared<testing::InstrumentedTransport>(
      [](const std::string&, const std::string& body) {
        return HttpResponse{200, chat_completion_body("reply " + sha256_hex(body).substr(0, 8))};
      },
      200us);
  testing::TempDir dir;
  auto cfg = testing::fast_config("burst");
  cfg.max_in_flight = 6;
  cfg.cache_dir = dir / "cache";
  ChatProvider p(cfg, transport);
  std::vector<ChatRequest> burst;
  for (int i = 0; i < 500; ++i) burst.push_back(make_request(Role::kGenerator, "request " + std::to_string(i)));
  const auto out = p.chat_batch(burst);
  bool all_ok = true;
  for (const auto& o : out) all_ok = all_ok && o.text.has_value();
  const int peak = transport->peak_in_flight();
  const int cold = transport->calls();
  p.chat(burst[17]);
  const int warm = transport->calls() - cold;
  std::ostringstream d;
  d << "peak in-flight " << peak << " <= max " << cfg.max_in_flight << " over " << cold
    << " calls; warm repeat made " << warm << " transport calls (expect 0)";
  report(10, all_ok && peak <= cfg.max_in_flight && cold == 500 && warm == 0, d.str());
}

}  // namespace

int main() {
  testing::TempDir work;
  const auto run_a = work / "run-a", run_b = work / "run-b";
  // The two toy runs feed both the shape check and the determinism check.
  ToyRuns runs;
  try {
    runs = run_toy_twice(run_a, run_b);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "toy run failed: %s\n", e.what());
  }
  criterion(1, ac1_pair_oracle);
  criterion(2, ac2_cosine);
  criterion(3, ac3_case_difficulty);
  criterion(4, [&] {
    if (!runs.ok) throw std::runtime_error("toy run-all exited nonzero");
    ac4_table_shape(run_a);
  });
  criterion(5, ac5_gates);
  criterion(6, ac6_verification);
  criterion(7, ac7_review);
  criterion(8, ac8_curriculum);
  criterion(9, [&] { ac9_determinism(runs, run_a, run_b); });
  criterion(10, ac10_provider);
  std::printf("%s: %d criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
