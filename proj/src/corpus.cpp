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


#include "mixsynth/corpus.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mixsynth/error.hpp"

namespace mixsynth {

namespace {

const char* const kKnownKeys[] = {"id", "question", "answer", "difficulty",
                                  "source"};

std::string normalize_question(const std::string& q) {
  std::string out;
  out.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == '\r' && i + 1 < q.size() && q[i + 1] == '\n') continue;
    out.push_back(q[i]);
  }
  return trim(out);
}

}  // namespace

const SeedProblem* Corpus::find(const std::string& id) const {
  for (const auto& p : problems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::string question_id(const std::string& question) {
  return sha256_hex(normalize_question(question));
}

SeedProblem seed_from_json(const Json& record, const std::string& source_tag,
                           const std::string& where) {
  if (!record.is_object()) fail(ErrorKind::kSchema, where + ": record is not an object");
  auto require_string = [&](const char* key) -> std::string {
    auto it = record.find(key);
    if (it == record.end()) fail(ErrorKind::kSchema, where + ": missing field \"" + key + "\"");
    if (!it->is_string()) fail(ErrorKind::kSchema, where + ": field \"" + key + "\" must be a string");
    auto v = it->get<std::string>();
    if (trim(v).empty()) fail(ErrorKind::kSchema, where + ": field \"" + key + "\" is empty");
    return v;
  };

  SeedProblem p;
  p.question = require_string("question");
  p.answer = require_string("answer");

  auto d = record.find("difficulty");
  if (d == record.end()) fail(ErrorKind::kSchema, where + ": missing field \"difficulty\"");
  if (!d->is_number()) fail(ErrorKind::kSchema, where + ": field \"difficulty\" is not numeric");
  p.difficulty = d->get<double>();
  if (!std::isfinite(p.difficulty)) fail(ErrorKind::kSchema, where + ": difficulty is not finite");

  if (auto it = record.find("id"); it != record.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      fail(ErrorKind::kSchema, where + ": field \"id\" must be a non-empty string");
    }
    p.id = it->get<std::string>();
  } else {
    p.id = question_id(p.question);
  }

  if (auto it = record.find("source"); it != record.end()) {
    if (!it->is_string()) fail(ErrorKind::kSchema, where + ": field \"source\" must be a string");
    p.source = it->get<std::string>();
  } else {
    p.source = source_tag;
  }

  for (auto it = record.begin(); it != record.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || it.key() == k;
    if (!known) p.extra[it.key()] = it.value();
  }
  return p;
}

Json seed_to_json(const SeedProblem& p) {
  Json j = p.extra.is_object() ? p.extra : Json::object();
  j["id"] = p.id;
  j["question"] = p.question;
  j["answer"] = p.answer;
  j["difficulty"] = p.difficulty;
  if (!p.source.empty()) j["source"] = p.source;
  return j;
}

void validate_corpus(const Corpus& c) {
  std::unordered_map<std::string, std::size_t> ids;
  std::unordered_map<std::string, std::size_t> texts;
  for (std::size_t i = 0; i < c.problems.size(); ++i) {
    const auto& p = c.problems[i];
    if (auto [it, fresh] = ids.emplace(p.id, i); !fresh) {
      fail(ErrorKind::kDuplicate, c.name + ": duplicate id \"" + p.id + "\" (records " +
                                      std::to_string(it->second + 1) + " and " +
                                      std::to_string(i + 1) + ")");
    }
    if (auto [it, fresh] = texts.emplace(p.question, i); !fresh) {
      fail(ErrorKind::kDuplicate, c.name + ": duplicate question text (records " +
                                      std::to_string(it->second + 1) + " and " +
                                      std::to_string(i + 1) + ")");
    }
  }
}

Corpus load_corpus(const std::filesystem::path& path, const std::string& source_tag) {
  Corpus c;
  c.name = source_tag.empty() ? path.stem().string() : source_tag;
  const auto records = read_jsonl(path);
  // Physical line numbers, counting the blank lines read_jsonl skips.
  std::vector<std::size_t> line_numbers;
  {
    const auto text = read_text(path);
    std::size_t line = 1, start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        if (!trim(std::string_view(text).substr(start, i - start)).empty()) {
          line_numbers.push_back(line);
        }
        ++line;
        start = i + 1;
      }
    }
  }
  c.problems.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto where = path.string() + ": line " + std::to_string(line_numbers[i]);
    c.problems.push_back(seed_from_json(records[i], source_tag, where));
  }
  validate_corpus(c);
  return c;
}

void save_corpus(const Corpus& c, const std::filesystem::path& path) {
  std::vector<Json> records;
  records.reserve(c.problems.size());
  for (const auto& p : c.problems) records.push_back(seed_to_json(p));
  write_jsonl(path, records);
}

Corpus merge_corpora(const std::vector<Corpus>& parts, std::string name) {
  Corpus merged;
  merged.name = std::move(name);
  for (const auto& part : parts) {
    merged.problems.insert(merged.problems.end(), part.problems.begin(), part.problems.end());
  }
  validate_corpus(merged);
  return merged;
}

CorpusStats corpus_stats(const Corpus& c) {
  CorpusStats s;
  s.total = c.problems.size();
  for (const auto& p : c.problems) {
    ++s.per_difficulty[p.difficulty];
    ++s.per_source[p.source];
  }
  return s;
}

Json stats_to_json(const CorpusStats& s) {
  Json j;
  j["total"] = s.total;
  Json hist = Json::object();
  for (const auto& [d, n] : s.per_difficulty) hist[format_real(d)] = n;
  j["per_difficulty"] = hist;
  Json src = Json::object();
  for (const auto& [k, n] : s.per_source) src[k] = n;
  j["per_source"] = src;
  return j;
}

}  // namespace mixsynth
