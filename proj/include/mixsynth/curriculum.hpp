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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixsynth/providers.hpp"
#include "mixsynth/synthesis.hpp"

namespace mixsynth {

/// A training record awaiting staging. Labels read "<dataset>/<category>",
/// e.g. "MathMixupQA/Hybrid" or "External/Sequential".
struct GradedItem {
  std::string question_id;
  std::string question;
  std::string solution;
  std::string category_label;
  std::optional<double> nominal_difficulty;
  std::optional<double> difficulty_score;
};

std::string category_label(Category c);  // "MathMixupQA/Decomposed", ...
std::string label_dataset(const std::string& label);
std::string label_category(const std::string& label);

void validate_item(const GradedItem& item);
Json item_to_json(const GradedItem& item);
GradedItem item_from_json(const Json& j);
std::vector<GradedItem> load_items(const std::filesystem::path& path);

struct Stage {
  std::string name;
  std::vector<std::string> categories;
  std::vector<GradedItem> items;
  double mean_difficulty = 0.0;
};

struct CurriculumPlan {
  std::vector<Stage> stages;
  int grouping = 1;
  std::vector<std::string> warnings;
};

/// Three stages in the fixed order decomposed, original, hybrid, items
/// sorted by id. Stage means use nominal difficulty. A category with no
/// items is an error unless `allow_empty`.
CurriculumPlan build_pure_curriculum(const std::vector<GradedItem>& items, bool allow_empty = false);

struct DifficultyScore {
  std::string question_id;
  double score = 0.0;
  std::string scorer_tag;
};

inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 10.0;

/// First number directly before "/10", else the first standalone number.
std::optional<double> parse_difficulty_score(const std::string& response);
std::string render_scoring_prompt(const std::string& question);

struct ScoringRun {
  std::vector<DifficultyScore> scores;
  std::vector<std::string> missing;
  std::vector<std::string> warnings;
};

/// One score per item; an unparseable response is retried once, then the
/// item is reported missing. Out-of-range scores are clamped with a warning.
ScoringRun score_difficulty(const std::vector<GradedItem>& items, ChatProvider& provider);

struct BlendOptions {
  int grouping = 2;
  bool per_item = false;  // rank individual items instead of categories
};

/// Orders categories by mean score (ties by dataset then category name)
/// and merges each run of `grouping` consecutive categories into a stage.
/// Unscored items inherit their category mean.
CurriculumPlan build_blended_curriculum(const std::vector<std::vector<GradedItem>>& datasets,
                                        const std::map<std::string, double>& scores,
                                        const BlendOptions& opts = {});

/// Writes stage1.jsonl .. stageN.jsonl and manifest.json under out_dir.
void export_sft_stages(const CurriculumPlan& plan, const std::filesystem::path& out_dir,
                       bool allow_empty = false);

}  // namespace mixsynth
