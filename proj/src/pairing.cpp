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


#include "mixsynth/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <tuple>

#include "mixsynth/error.hpp"

namespace mixsynth {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorKind::kPrecondition, "embedding has dimension 0");
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorKind::kPrecondition, "embedding has a non-finite component");
    sum += v * v;
  }
  norm_ = std::sqrt(sum);
  if (!(norm_ > 0.0)) fail(ErrorKind::kPrecondition, "embedding has zero norm");
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::kPrecondition, "cosine of an empty embedding");
  if (a.dimension() != b.dimension()) {
    fail(ErrorKind::kPrecondition, "embedding dimension mismatch: " +
                                       std::to_string(a.dimension()) + " vs " +
                                       std::to_string(b.dimension()));
  }
  const auto av = a.values();
  const auto bv = b.values();
  double dot = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) dot += av[i] * bv[i];
  const double sim = dot / (a.norm() * b.norm());
  return std::clamp(sim, -1.0, 1.0);
}

void validate_pairing_config(const PairingConfig& cfg) {
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
    fail(ErrorKind::kConfig, "pairing tau must lie in (0, 1), got " + format_real(cfg.tau));
  }
}

std::optional<std::string> tau_band_warning(double tau) {
  if (tau < 0.75 || tau > 0.9) {
    return "tau " + format_real(tau) + " is outside the recommended range [0.75, 0.9]";
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  std::size_t i, j;  // indices into the id-sorted problem list, i < j
  double sim;
};

}  // namespace

std::vector<QuestionPair> build_pairs(const Corpus& c, const EmbeddingMap& embeddings,
                                      const PairingConfig& cfg) {
  validate_pairing_config(cfg);

  std::vector<const SeedProblem*> items;
  items.reserve(c.problems.size());
  for (const auto& p : c.problems) items.push_back(&p);
  std::sort(items.begin(), items.end(),
            [](const SeedProblem* a, const SeedProblem* b) { return a->id < b->id; });

  std::vector<const EmbeddingVector*> vecs;
  vecs.reserve(items.size());
  for (const auto* p : items) {
    auto it = embeddings.find(p->id);
    if (it == embeddings.end()) fail(ErrorKind::kPrecondition, "missing embedding for id " + p->id);
    if (!vecs.empty() && it->second.dimension() != vecs.front()->dimension()) {
      fail(ErrorKind::kPrecondition, "embedding dimension mismatch for id " + p->id);
    }
    vecs.push_back(&it->second);
  }

  const std::size_t n = items.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n / 64 + 1));
  std::vector<std::vector<Candidate>> partial(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        // Rows are strided across workers.
        for (std::size_t i = w; i < n; i += workers) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (items[i]->difficulty == items[j]->difficulty) continue;
            const double sim = cosine_similarity(*vecs[i], *vecs[j]);
            if (sim > cfg.tau) partial[w].push_back({i, j, sim});
          }
        }
      });
    }
  }
  std::vector<Candidate> cands;
  for (auto& part : partial) cands.insert(cands.end(), part.begin(), part.end());
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  std::vector<bool> keep(cands.size(), true);
  if (cfg.max_pairs_per_question > 0) {
    std::fill(keep.begin(), keep.end(), false);
    std::vector<std::vector<std::size_t>> by_question(n);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      by_question[cands[k].i].push_back(k);
      by_question[cands[k].j].push_back(k);
    }
    for (std::size_t q = 0; q < n; ++q) {
      auto& ks = by_question[q];
      auto partner = [&](std::size_t k) { return cands[k].i == q ? cands[k].j : cands[k].i; };
      // Partner index order equals partner id order since items are id-sorted.
      std::sort(ks.begin(), ks.end(), [&](std::size_t a, std::size_t b) {
        if (cands[a].sim != cands[b].sim) return cands[a].sim > cands[b].sim;
        return partner(a) < partner(b);
      });
      const std::size_t take = std::min(ks.size(), cfg.max_pairs_per_question);
      for (std::size_t r = 0; r < take; ++r) keep[ks[r]] = true;
    }
  }

  std::vector<QuestionPair> pairs;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (!keep[k]) continue;
    const SeedProblem* a = items[cands[k].i];
    const SeedProblem* b = items[cands[k].j];
    if (a->difficulty > b->difficulty) std::swap(a, b);
    pairs.push_back({a->id, b->id, a->difficulty, b->difficulty, cands[k].sim});
  }
  std::sort(pairs.begin(), pairs.end(), [](const QuestionPair& x, const QuestionPair& y) {
    return std::tie(x.low_id, x.high_id) < std::tie(y.low_id, y.high_id);
  });
  return pairs;
}

std::optional<QuestionPair> select_generation_pair(const std::string& question_id,
                                                   const std::vector<QuestionPair>& pairs) {
  const QuestionPair* best = nullptr;
  for (const auto& p : pairs) {
    if (!p.contains(question_id)) continue;
    if (best == nullptr || p.similarity > best->similarity ||
        (p.similarity == best->similarity &&
         p.partner_of(question_id) < best->partner_of(question_id))) {
      best = &p;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

Json pair_to_json(const QuestionPair& p) {
  return Json{{"low_id", p.low_id}, {"high_id", p.high_id}, {"similarity", p.similarity}};
}

QuestionPair pair_from_json(const Json& j, const Corpus& c) {
  QuestionPair p;
  try {
    p.low_id = j.at("low_id").get<std::string>();
    p.high_id = j.at("high_id").get<std::string>();
    p.similarity = j.at("similarity").get<double>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::kSchema, std::string("bad pair record: ") + e.what());
  }
  const auto* lo = c.find(p.low_id);
  const auto* hi = c.find(p.high_id);
  if (lo == nullptr || hi == nullptr) {
    fail(ErrorKind::kSchema, "pair references unknown id " + (lo ? p.high_id : p.low_id));
  }
  if (!(lo->difficulty < hi->difficulty)) {
    fail(ErrorKind::kSchema, "pair " + p.low_id + "/" + p.high_id + " is not in (low, high) order");
  }
  p.low_difficulty = lo->difficulty;
  p.high_difficulty = hi->difficulty;
  return p;
}

void save_pairs(const std::vector<QuestionPair>& pairs, const std::filesystem::path& path) {
  std::vector<Json> records;
  records.reserve(pairs.size());
  for (const auto& p : pairs) records.push_back(pair_to_json(p));
  write_jsonl(path, records);
}

std::vector<QuestionPair> load_pairs(const std::filesystem::path& path, const Corpus& c) {
  std::vector<QuestionPair> pairs;
  for (const auto& j : read_jsonl(path)) pairs.push_back(pair_from_json(j, c));
  return pairs;
}

}  // namespace mixsynth
