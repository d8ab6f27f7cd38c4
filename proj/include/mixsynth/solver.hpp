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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixsynth/corpus.hpp"
#include "mixsynth/providers.hpp"
#include "mixsynth/synthesis.hpp"

namespace mixsynth {

struct GateConfig {
  bool require_boxed = true;
  double max_duplicate_2gram_ratio = 0.60;
  double max_duplicate_3gram_ratio = 0.40;
  std::size_t max_consecutive_repeat = 10;
  int max_attempts = 3;
};

void validate_gate_config(const GateConfig& cfg);

/// Last "\boxed{...}" with brace-balanced content, trimmed. Empty content,
/// a missing token or an unterminated group yield nullopt.
std::optional<std::string> extract_boxed(const std::string& text);

/// Lowercased tokens; every ASCII punctuation character is its own token.
std::vector<std::string> ngram_tokens(const std::string& text);

struct NgramStats {
  std::size_t total = 0;
  std::size_t distinct = 0;
  double duplicate_ratio = 0.0;     // 1 - distinct / total
  std::size_t max_consecutive = 0;  // longest tandem run of one n-gram at stride n
};

NgramStats ngram_degeneracy(const std::string& text, std::size_t n);

struct GateReport {
  bool boxed_present = false;
  std::optional<std::string> final_answer;
  NgramStats bigram;
  NgramStats trigram;
  bool boxed_ok = false;
  bool bigram_ok = false;
  bool trigram_ok = false;
  bool repeat_ok = false;

  bool passed() const { return boxed_ok && bigram_ok && trigram_ok && repeat_ok; }
};

GateReport check_gates(const std::string& solution, const GateConfig& cfg);
Json gate_report_to_json(const GateReport& r);

/// Solution prompt for a synthesized question with its two parents as
/// reference material. Parents must match the question's recorded parents.
std::string render_solution_prompt(const SynthesizedQuestion& q, const SeedProblem& low,
                                   const SeedProblem& high);
/// Original items are solved with their own reference answer as context.
std::string render_solution_prompt(const SeedProblem& original);

enum class SolutionStatus { kAccepted, kFailed };

struct SolutionRecord {
  std::string question_id;
  std::string solution_text;
  std::string final_answer;
  int attempts = 0;
  SolutionStatus status = SolutionStatus::kFailed;
  GateReport gate_report;
  std::string error;  // last provider error, if any
};

Json solution_to_json(const SolutionRecord& r);

struct SolveJob {
  std::string question_id;
  std::string prompt;
};

/// Generate-then-gate loop for many questions. Attempt k+1 for a question
/// is issued only after attempt k failed; questions run in parallel.
std::vector<SolutionRecord> solve_jobs(const std::vector<SolveJob>& jobs, ChatProvider& provider,
                                       const GateConfig& cfg);

/// Single-question form. Requires q.status == verified.
SolutionRecord solve_with_gates(const SynthesizedQuestion& q,
                                const std::pair<SeedProblem, SeedProblem>& parents,
                                ChatProvider& provider, const GateConfig& cfg);

}  // namespace mixsynth
