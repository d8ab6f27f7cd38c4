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


#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mixsynth/util.hpp"

namespace mixsynth {

/// One (question, answer, difficulty) seed record.
struct SeedProblem {
  std::string id;
  std::string question;
  std::string answer;
  double difficulty = 0.0;
  std::string source;
  // Keys not known to the record schema, preserved on round-trip.
  Json extra = Json::object();

  bool operator==(const SeedProblem&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<SeedProblem> problems;

  const SeedProblem* find(const std::string& id) const;
};

struct CorpusStats {
  std::size_t total = 0;
  std::map<double, std::size_t> per_difficulty;
  std::map<std::string, std::size_t> per_source;
};

/// Content id for a question: SHA-256 of the trimmed, LF-normalised text.
std::string question_id(const std::string& question);

/// Validates and converts one record. `where` prefixes diagnostics.
SeedProblem seed_from_json(const Json& record, const std::string& source_tag,
                           const std::string& where);
Json seed_to_json(const SeedProblem& p);

/// Loads a seed/output record file. Ids default to the content id of the
/// question; duplicate ids and byte-identical questions are rejected.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::string& source_tag);
void save_corpus(const Corpus& c, const std::filesystem::path& path);

/// Checks corpus-level invariants (unique ids and question texts).
void validate_corpus(const Corpus& c);

/// Concatenates corpora, re-validating uniqueness across them.
Corpus merge_corpora(const std::vector<Corpus>& parts, std::string name);

CorpusStats corpus_stats(const Corpus& c);
Json stats_to_json(const CorpusStats& s);

}  // namespace mixsynth
