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


#include "mixsynth/curriculum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>
#include <tuple>

#include "mixsynth/error.hpp"
#include "mixsynth/prompts.hpp"

namespace mixsynth {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::optional<double> item_difficulty(const GradedItem& item) {
  if (item.difficulty_score) return item.difficulty_score;
  return item.nominal_difficulty;
}

double stage_mean(const std::vector<GradedItem>& items, bool prefer_score) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& it : items) {
    auto d = prefer_score ? item_difficulty(it)
                          : (it.nominal_difficulty ? it.nominal_difficulty : it.difficulty_score);
    if (d) {
      sum += *d;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void check_unique_ids(const std::vector<const GradedItem*>& items) {
  std::set<std::string> seen;
  for (const auto* it : items) {
    if (!seen.insert(it->question_id).second) {
      fail(ErrorKind::kPrecondition, "item id " + it->question_id + " appears more than once");
    }
  }
}

void check_monotone(CurriculumPlan& plan) {
  for (std::size_t s = 1; s < plan.stages.size(); ++s) {
    if (plan.stages[s].items.empty() || plan.stages[s - 1].items.empty()) continue;
    if (plan.stages[s].mean_difficulty < plan.stages[s - 1].mean_difficulty) {
      plan.warnings.push_back("stage " + plan.stages[s].name + " mean " +
                              format_real(plan.stages[s].mean_difficulty) + " is below stage " +
                              plan.stages[s - 1].name + " mean " +
                              format_real(plan.stages[s - 1].mean_difficulty));
    }
  }
}

}  // namespace

std::string category_label(Category c) {
  switch (c) {
    case Category::kDecomposed: return "MathMixupQA/Decomposed";
    case Category::kOriginal: return "MathMixupQA/Original";
    case Category::kHybrid: return "MathMixupQA/Hybrid";
  }
  return {};
}

std::string label_dataset(const std::string& label) {
  const auto slash = label.find('/');
  return slash == std::string::npos ? std::string() : label.substr(0, slash);
}

std::string label_category(const std::string& label) {
  const auto slash = label.find('/');
  return slash == std::string::npos ? label : label.substr(slash + 1);
}

void validate_item(const GradedItem& item) {
  if (trim(item.question).empty() || trim(item.solution).empty()) {
    fail(ErrorKind::kSchema, "item " + item.question_id + " has an empty question or solution");
  }
  if (item.category_label.empty()) {
    fail(ErrorKind::kSchema, "item " + item.question_id + " has no category label");
  }
}

Json item_to_json(const GradedItem& item) {
  Json j{{"id", item.question_id},
         {"question", item.question},
         {"solution", item.solution},
         {"category_label", item.category_label}};
  if (item.nominal_difficulty) j["difficulty"] = *item.nominal_difficulty;
  if (item.difficulty_score) j["score"] = *item.difficulty_score;
  return j;
}

GradedItem item_from_json(const Json& j) {
  GradedItem item;
  try {
    item.question_id = j.at("id").get<std::string>();
    item.question = j.at("question").get<std::string>();
    item.solution = j.at("solution").get<std::string>();
    item.category_label = j.at("category_label").get<std::string>();
    if (j.contains("difficulty")) item.nominal_difficulty = j.at("difficulty").get<double>();
    if (j.contains("score")) item.difficulty_score = j.at("score").get<double>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::kSchema, std::string("bad graded item: ") + e.what());
  }
  validate_item(item);
  return item;
}

std::vector<GradedItem> load_items(const std::filesystem::path& path) {
  std::vector<GradedItem> items;
  for (const auto& j : read_jsonl(path)) items.push_back(item_from_json(j));
  return items;
}

CurriculumPlan build_pure_curriculum(const std::vector<GradedItem>& items, bool allow_empty) {
  CurriculumPlan plan;
  plan.grouping = 1;
  const Category order[] = {Category::kDecomposed, Category::kOriginal, Category::kHybrid};
  for (Category c : order) {
    Stage st;
    st.name = category_name(c);
    st.categories.push_back(category_label(c));
    plan.stages.push_back(std::move(st));
  }
  std::vector<const GradedItem*> all;
  for (const auto& item : items) {
    validate_item(item);
    all.push_back(&item);
    const auto cat = lower(label_category(item.category_label));
    bool placed = false;
    for (std::size_t s = 0; s < 3; ++s) {
      if (cat == category_name(order[s])) {
        plan.stages[s].items.push_back(item);
        placed = true;
      }
    }
    if (!placed) {
      fail(ErrorKind::kPrecondition, "item " + item.question_id + " has label " +
                                         item.category_label + ", not a decomposed/original/hybrid category");
    }
  }
  check_unique_ids(all);
  for (auto& st : plan.stages) {
    std::sort(st.items.begin(), st.items.end(),
              [](const GradedItem& a, const GradedItem& b) { return a.question_id < b.question_id; });
    st.mean_difficulty = stage_mean(st.items, false);
    if (st.items.empty()) {
      if (!allow_empty) fail(ErrorKind::kPrecondition, "category " + st.name + " has no items");
      plan.warnings.push_back("stage " + st.name + " is empty");
    }
  }
  check_monotone(plan);
  return plan;
}

std::optional<double> parse_difficulty_score(const std::string& response) {
  static const std::regex kOutOfTen(R"((-?\d+(?:\.\d+)?)\s*/\s*10(?![0-9]))");
  static const std::regex kStandalone(R"((?:^|[^A-Za-z0-9_.])(-?\d+(?:\.\d+)?)(?![A-Za-z0-9_]))");
  std::smatch m;
  if (std::regex_search(response, m, kOutOfTen) || std::regex_search(response, m, kStandalone)) {
    return std::stod(m[1].str());
  }
  return std::nullopt;
}

std::string render_scoring_prompt(const std::string& question) {
  std::string out(prompts::kScoringInstructions);
  out += "\n\nProblem:\n" + question + "\n";
  return out;
}

ScoringRun score_difficulty(const std::vector<GradedItem>& items, ChatProvider& provider) {
  ScoringRun run;
  std::vector<std::optional<double>> parsed(items.size());
  std::vector<ChatRequest> reqs;
  reqs.reserve(items.size());
  for (const auto& item : items) reqs.push_back(make_request(Role::kScorer, render_scoring_prompt(item.question)));

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<std::size_t> pending;
    std::vector<ChatRequest> batch;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!parsed[i]) {
        pending.push_back(i);
        batch.push_back(reqs[i]);
      }
    }
    if (pending.empty()) break;
    const auto outcomes = provider.chat_batch(batch, attempt_variant(attempt));
    for (std::size_t r = 0; r < pending.size(); ++r) {
      if (outcomes[r].text) parsed[pending[r]] = parse_difficulty_score(*outcomes[r].text);
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!parsed[i]) {
      run.missing.push_back(items[i].question_id);
      continue;
    }
    double score = *parsed[i];
    if (score < kMinScore || score > kMaxScore) {
      run.warnings.push_back("score " + format_real(score) + " for " + items[i].question_id +
                             " clamped to [1, 10]");
      score = std::clamp(score, kMinScore, kMaxScore);
    }
    run.scores.push_back({items[i].question_id, score, provider.config().model_tag});
  }
  return run;
}

CurriculumPlan build_blended_curriculum(const std::vector<std::vector<GradedItem>>& datasets,
                                        const std::map<std::string, double>& scores,
                                        const BlendOptions& opts) {
  if (opts.grouping < 1) fail(ErrorKind::kPrecondition, "grouping must be >= 1");
  std::vector<const GradedItem*> all;
  for (const auto& ds : datasets) {
    for (const auto& item : ds) {
      validate_item(item);
      all.push_back(&item);
    }
  }
  check_unique_ids(all);

  std::map<std::string, std::vector<GradedItem>> by_label;
  for (const auto* item : all) {
    GradedItem copy = *item;
    if (auto it = scores.find(copy.question_id); it != scores.end()) copy.difficulty_score = it->second;
    by_label[copy.category_label].push_back(std::move(copy));
  }

  struct Cat {
    std::string label;
    double mean;
  };
  std::vector<Cat> cats;
  for (auto& [label, items] : by_label) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& it : items) {
      if (it.difficulty_score) {
        sum += *it.difficulty_score;
        ++n;
      }
    }
    if (n == 0) fail(ErrorKind::kPrecondition, "category " + label + " has no scored items");
    const double mean = sum / static_cast<double>(n);
    for (auto& it : items) {
      if (!it.difficulty_score) it.difficulty_score = mean;
    }
    std::sort(items.begin(), items.end(),
              [](const GradedItem& a, const GradedItem& b) { return a.question_id < b.question_id; });
    cats.push_back({label, mean});
  }
  std::sort(cats.begin(), cats.end(), [](const Cat& a, const Cat& b) {
    return std::make_tuple(a.mean, label_dataset(a.label), label_category(a.label)) <
           std::make_tuple(b.mean, label_dataset(b.label), label_category(b.label));
  });

  CurriculumPlan plan;
  plan.grouping = opts.grouping;
  const std::size_t group = static_cast<std::size_t>(opts.grouping);
  const std::size_t stage_count = (cats.size() + group - 1) / group;

  if (!opts.per_item) {
    for (std::size_t s = 0; s < stage_count; ++s) {
      Stage st;
      st.name = "stage" + std::to_string(s + 1);
      for (std::size_t k = s * group; k < std::min(cats.size(), (s + 1) * group); ++k) {
        st.categories.push_back(cats[k].label);
        auto& items = by_label[cats[k].label];
        st.items.insert(st.items.end(), items.begin(), items.end());
      }
      st.mean_difficulty = stage_mean(st.items, true);
      plan.stages.push_back(std::move(st));
    }
  } else {
    std::vector<GradedItem> ranked;
    for (const auto& c : cats) {
      auto& items = by_label[c.label];
      ranked.insert(ranked.end(), items.begin(), items.end());
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const GradedItem& a, const GradedItem& b) {
      return std::tie(*a.difficulty_score, a.category_label, a.question_id) <
             std::tie(*b.difficulty_score, b.category_label, b.question_id);
    });
    std::size_t offset = 0;
    for (std::size_t s = 0; s < stage_count; ++s) {
      const std::size_t size = ranked.size() / stage_count + (s < ranked.size() % stage_count ? 1 : 0);
      Stage st;
      st.name = "stage" + std::to_string(s + 1);
      st.items.assign(ranked.begin() + static_cast<std::ptrdiff_t>(offset),
                      ranked.begin() + static_cast<std::ptrdiff_t>(offset + size));
      std::set<std::string> labels;
      for (const auto& it : st.items) labels.insert(it.category_label);
      st.categories.assign(labels.begin(), labels.end());
      st.mean_difficulty = stage_mean(st.items, true);
      plan.stages.push_back(std::move(st));
      offset += size;
    }
  }
  check_monotone(plan);
  return plan;
}

void export_sft_stages(const CurriculumPlan& plan, const std::filesystem::path& out_dir,
                       bool allow_empty) {
  if (plan.stages.empty()) fail(ErrorKind::kPrecondition, "curriculum plan has no stages");
  for (const auto& st : plan.stages) {
    if (st.items.empty() && !allow_empty) {
      fail(ErrorKind::kPrecondition, "stage " + st.name + " is empty");
    }
  }
  Json manifest{{"grouping", plan.grouping}, {"warnings", plan.warnings}};
  Json stages = Json::array();
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    const auto& st = plan.stages[s];
    const auto file = "stage" + std::to_string(s + 1) + ".jsonl";
    std::vector<Json> lines;
    lines.reserve(st.items.size());
    for (const auto& it : st.items) {
      const auto d = item_difficulty(it);
      lines.push_back({{"messages",
                        Json::array({{{"role", "user"}, {"content", it.question}},
                                     {{"role", "assistant"}, {"content", it.solution}}})},
                       {"meta",
                        {{"id", it.question_id},
                         {"category_label", it.category_label},
                         {"difficulty", d ? Json(*d) : Json(nullptr)}}}});
    }
    write_jsonl(out_dir / file, lines);
    stages.push_back({{"index", s + 1},
                      {"name", st.name},
                      {"file", file},
                      {"size", st.items.size()},
                      {"mean_difficulty", st.mean_difficulty},
                      {"categories", st.categories}});
  }
  manifest["stages"] = std::move(stages);
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace mixsynth
