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

#include <optional>
#include <string>
#include <vector>

#include "mixsynth/corpus.hpp"
#include "mixsynth/pairing.hpp"
#include "mixsynth/providers.hpp"

namespace mixsynth {

// Curriculum order: decomposed < original < hybrid.
enum class Category { kDecomposed = 0, kOriginal = 1, kHybrid = 2 };

const char* category_name(Category c);
Category category_from_name(const std::string& name);

enum class QuestionStatus { kUnverified, kVerified, kRejected };

const char* status_name(QuestionStatus s);
QuestionStatus status_from_name(const std::string& name);

struct SynthesizedQuestion {
  std::string id;
  std::string question;
  Category category = Category::kHybrid;
  double nominal_difficulty = 0.0;
  std::string parent_low_id;
  std::string parent_high_id;
  std::string raw_generation;
  QuestionStatus status = QuestionStatus::kUnverified;
};

Json question_to_json(const SynthesizedQuestion& q);
SynthesizedQuestion question_from_json(const Json& j);
void save_questions(const std::vector<SynthesizedQuestion>& qs, const std::filesystem::path& path);
std::vector<SynthesizedQuestion> load_questions(const std::filesystem::path& path);

struct DifficultyFormula {
  enum class DecomposedRule { kFloorMean, kMean };
  double hybrid_offset = 1.0;
  DecomposedRule decomposed = DecomposedRule::kFloorMean;
};

/// Hybrid: d_high + offset. Decomposed: floor of the parents' mean, clamped
/// into [d_low, d_high]. Requires d_low < d_high; the original category
/// carries its own seed difficulty and is rejected here.
double nominal_difficulty(Category category, double d_low, double d_high,
                          const DifficultyFormula& formula = {});

/// Generation prompt for a pair. Problem 1 is the harder parent, Problem 2
/// the easier one, each with its answer and difficulty label.
std::string render_prompt(Category tmpl, const SeedProblem& low, const SeedProblem& high);
std::string render_prompt(Category tmpl, const QuestionPair& pair, const Corpus& corpus);

/// Text after the last "#New Problem#:" header, trimmed. Throws a parse
/// error for a missing header, an empty body, a later "#...#" header,
/// a mention of Problem 1/2, or multiple-choice markers.
std::string parse_generation(const std::string& output, Category tmpl);

bool mentions_source_problems(const std::string& text);
/// Two or more distinct markers among "(A)".."(D)".
bool has_multiple_choice_markers(const std::string& text);

struct SkipRecord {
  std::string seed_id;
  std::string reason;
};

struct SynthesisConfig {
  DifficultyFormula formula;
  int parse_retries = 1;
};

struct SynthesisResult {
  std::vector<SynthesizedQuestion> questions;
  std::vector<SkipRecord> skips;
  std::size_t failures = 0;  // skips caused by provider or parse errors
};

/// One generation request per seed with a generation pair, issued in
/// parallel through the provider. Output is ordered by seed id; every seed
/// lands either in `questions` or in `skips`.
SynthesisResult synthesize_category(const Corpus& c, const std::vector<QuestionPair>& pairs,
                                    Category tmpl, ChatProvider& provider,
                                    const SynthesisConfig& cfg = {});

std::string synthesized_id(Category tmpl, const std::string& seed_id);

}  // namespace mixsynth
