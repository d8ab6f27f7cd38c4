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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mixsynth/providers.hpp"
#include "mixsynth/synthesis.hpp"

namespace mixsynth {

// The six rubric dimensions, in rubric order.
enum class Dimension { kClarity, kCompleteness, kFormatting, kRelevance, kSolvability, kLogicalFlow };
inline constexpr std::size_t kDimensionCount = 6;

const char* dimension_label(Dimension d);  // "Logical Flow"
const char* dimension_key(Dimension d);    // "logical_flow"

struct VerificationVerdict {
  std::string question_id;
  std::array<bool, kDimensionCount> dimension_pass{};
  bool overall = false;
  std::string rationale;
  bool structural = false;  // decided by pre-checks, no provider call

  bool passes(Dimension d) const { return dimension_pass[static_cast<std::size_t>(d)]; }
};

Json verdict_to_json(const VerificationVerdict& v);

/// Rubric plus the output-format block plus the question.
std::string render_verification_prompt(const std::string& question);

/// Reason a question fails the structural pre-checks, if any.
std::optional<std::string> structural_check(const std::string& question);

/// Parses "<Dimension>: PASS|FAIL" lines (case-insensitive, optional list
/// numbering and markdown emphasis). Throws a parse error if any dimension
/// is absent. `overall` is always the conjunction of the six.
VerificationVerdict parse_verdict(const std::string& response, const std::string& question_id);

/// Verifies one unverified question and updates its status. An unparseable
/// response throws and leaves the question unverified.
VerificationVerdict verify_question(SynthesizedQuestion& q, ChatProvider& provider);

struct VerificationRun {
  std::vector<VerificationVerdict> verdicts;
  std::vector<std::pair<std::string, std::string>> failures;  // id, reason
};

/// Batch form of verify_question with bounded parallelism. Items that are
/// not unverified are left untouched.
VerificationRun verify_all(std::vector<SynthesizedQuestion>& qs, ChatProvider& provider);

// ---------------------------------------------------------------------------
// Human review sampling

inline constexpr const char* kReviewSamplerId = "mt19937_64+fisher-yates-rejection/v1";

enum class ReviewDecision { kAccept, kReject };

struct ReviewVerdict {
  ReviewDecision decision = ReviewDecision::kAccept;
  std::string note;
};

struct ReviewBatch {
  double sample_rate = 0.10;
  std::uint64_t seed = 0;
  std::string algorithm = kReviewSamplerId;
  std::size_t population = 0;
  std::vector<std::string> items;
  std::map<std::string, ReviewVerdict> verdicts;
};

/// Uniform index in [0, bound] drawn by rejection from raw 64-bit outputs.
std::uint64_t bounded_draw(std::uint64_t bound, std::mt19937_64& rng);

/// Seeded Fisher-Yates shuffle of the population, then the first
/// round(rate * N) ids. Rounding is half away from zero.
ReviewBatch sample_for_review(const std::vector<std::string>& population, double rate,
                              std::uint64_t seed);

/// Annotation file: a header line, then {question_id, question, verdict:"", note:""}.
void export_review_batch(const ReviewBatch& batch, const std::vector<SynthesizedQuestion>& qs,
                         const std::filesystem::path& path);

/// Reads an annotated batch. Empty verdicts mean "not reviewed"; anything
/// other than "", "accept" or "reject" is a schema error.
ReviewBatch import_review_batch(const std::filesystem::path& path);

/// Marks rejected items. Every verdict id must exist in the dataset.
void apply_review(const ReviewBatch& batch, std::vector<SynthesizedQuestion>& qs);

}  // namespace mixsynth
