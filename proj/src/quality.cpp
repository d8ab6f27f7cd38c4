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


#include "mixsynth/quality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "mixsynth/error.hpp"
#include "mixsynth/prompts.hpp"

namespace mixsynth {

namespace {

constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::kClarity,   Dimension::kCompleteness, Dimension::kFormatting,
    Dimension::kRelevance, Dimension::kSolvability,  Dimension::kLogicalFlow};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

}  // namespace

const char* dimension_label(Dimension d) {
  switch (d) {
    case Dimension::kClarity: return "Clarity";
    case Dimension::kCompleteness: return "Completeness";
    case Dimension::kFormatting: return "Formatting";
    case Dimension::kRelevance: return "Relevance";
    case Dimension::kSolvability: return "Solvability";
    case Dimension::kLogicalFlow: return "Logical Flow";
  }
  return "";
}

const char* dimension_key(Dimension d) {
  switch (d) {
    case Dimension::kClarity: return "clarity";
    case Dimension::kCompleteness: return "completeness";
    case Dimension::kFormatting: return "formatting";
    case Dimension::kRelevance: return "relevance";
    case Dimension::kSolvability: return "solvability";
    case Dimension::kLogicalFlow: return "logical_flow";
  }
  return "";
}

Json verdict_to_json(const VerificationVerdict& v) {
  Json dims = Json::object();
  for (auto d : kDimensions) dims[dimension_key(d)] = v.passes(d) ? "pass" : "fail";
  return Json{{"question_id", v.question_id},
              {"dimension_scores", dims},
              {"overall", v.overall ? "pass" : "fail"},
              {"rationale", v.rationale},
              {"structural", v.structural}};
}

std::string render_verification_prompt(const std::string& question) {
  std::string out(prompts::kVerificationRubric);
  out += "\n\n";
  out += prompts::kVerificationOutputFormat;
  out += "\n\n#Problem#:\n";
  out += question;
  out += "\n";
  return out;
}

std::optional<std::string> structural_check(const std::string& question) {
  if (trim(question).empty()) return "empty question";
  if (mentions_source_problems(question)) return "references Problem 1/2";
  if (has_multiple_choice_markers(question)) return "multiple-choice markers";
  return std::nullopt;
}

VerificationVerdict parse_verdict(const std::string& response, const std::string& question_id) {
  VerificationVerdict v;
  v.question_id = question_id;
  std::array<std::optional<bool>, kDimensionCount> seen;

  // "3. **Formatting**: PASS", "- logical flow - fail", ...
  static const std::regex kLine(
      R"(^[\s>*\-#]*(?:\d+[.)]\s*)?[*_]*([A-Za-z][A-Za-z ]*?)[*_]*\s*[:\-]\s*[*_]*(PASS|FAIL)\b)",
      std::regex::icase);
  std::istringstream in(response);
  std::string line;
  while (std::getline(in, line)) {
    const auto stripped = trim(line);
    if (lower(stripped).rfind("rationale:", 0) == 0) {
      v.rationale = trim(stripped.substr(10));
      continue;
    }
    std::smatch m;
    if (!std::regex_search(stripped, m, kLine)) continue;
    const auto name = lower(trim(m[1].str()));
    const bool pass = lower(m[2].str()) == "pass";
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
      if (name == lower(dimension_label(kDimensions[k])) && !seen[k]) seen[k] = pass;
    }
  }
  std::string missing;
  for (std::size_t k = 0; k < kDimensionCount; ++k) {
    if (!seen[k]) {
      missing += missing.empty() ? "" : ", ";
      missing += dimension_label(kDimensions[k]);
      continue;
    }
    v.dimension_pass[k] = *seen[k];
  }
  if (!missing.empty()) fail(ErrorKind::kParse, "verdict lacks dimension(s): " + missing);
  v.overall = std::all_of(v.dimension_pass.begin(), v.dimension_pass.end(), [](bool b) { return b; });
  return v;
}

namespace {

VerificationVerdict structural_verdict(const std::string& id, const std::string& reason) {
  VerificationVerdict v;
  v.question_id = id;
  v.structural = true;
  v.rationale = "structural: " + reason;
  v.dimension_pass.fill(true);
  // An empty or referencing statement is incomplete; choice markers break the format rule.
  if (reason == "multiple-choice markers") {
    v.dimension_pass[static_cast<std::size_t>(Dimension::kFormatting)] = false;
  } else {
    v.dimension_pass[static_cast<std::size_t>(Dimension::kCompleteness)] = false;
  }
  v.overall = false;
  return v;
}

void require_unverified(const SynthesizedQuestion& q) {
  if (q.status != QuestionStatus::kUnverified) {
    fail(ErrorKind::kPrecondition, "question " + q.id + " is already " + status_name(q.status));
  }
}

}  // namespace

VerificationVerdict verify_question(SynthesizedQuestion& q, ChatProvider& provider) {
  require_unverified(q);
  if (auto reason = structural_check(q.question)) {
    q.status = QuestionStatus::kRejected;
    return structural_verdict(q.id, *reason);
  }
  const auto response =
      provider.chat(make_request(Role::kVerifier, render_verification_prompt(q.question)));
  auto v = parse_verdict(response, q.id);
  q.status = v.overall ? QuestionStatus::kVerified : QuestionStatus::kRejected;
  return v;
}

VerificationRun verify_all(std::vector<SynthesizedQuestion>& qs, ChatProvider& provider) {
  VerificationRun run;
  std::vector<std::optional<VerificationVerdict>> verdicts(qs.size());
  std::vector<std::string> errors(qs.size());
  parallel_for(qs.size(), provider.config().max_in_flight, [&](std::size_t i) {
    if (qs[i].status != QuestionStatus::kUnverified) return;
    try {
      verdicts[i] = verify_question(qs[i], provider);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (verdicts[i]) run.verdicts.push_back(std::move(*verdicts[i]));
    if (!errors[i].empty()) run.failures.emplace_back(qs[i].id, errors[i]);
  }
  return run;
}

// ---------------------------------------------------------------------------

std::uint64_t bounded_draw(std::uint64_t bound, std::mt19937_64& rng) {
  if (bound == UINT64_MAX) return rng();
  const std::uint64_t range = bound + 1;
  // 2^64 mod range; rejecting draws below it leaves a multiple of range.
  const std::uint64_t floor = (UINT64_MAX % range + 1) % range;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= floor) return x % range;
  }
}

ReviewBatch sample_for_review(const std::vector<std::string>& population, double rate,
                              std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    fail(ErrorKind::kPrecondition, "review sample rate must lie in (0, 1]");
  }
  ReviewBatch batch;
  batch.sample_rate = rate;
  batch.seed = seed;
  batch.population = population.size();

  std::vector<std::string> order = population;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded_draw(i - 1, rng));
    std::swap(order[i - 1], order[j]);
  }
  const auto take = static_cast<std::size_t>(
      std::min<long long>(static_cast<long long>(order.size()),
                          std::llround(rate * static_cast<double>(order.size()))));
  batch.items.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  return batch;
}

void export_review_batch(const ReviewBatch& batch, const std::vector<SynthesizedQuestion>& qs,
                         const std::filesystem::path& path) {
  std::map<std::string, const SynthesizedQuestion*> by_id;
  for (const auto& q : qs) by_id[q.id] = &q;
  std::vector<Json> lines;
  lines.push_back({{"header",
                    {{"algorithm", batch.algorithm},
                     {"seed", batch.seed},
                     {"sample_rate", batch.sample_rate},
                     {"population", batch.population},
                     {"size", batch.items.size()}}}});
  for (const auto& id : batch.items) {
    auto it = by_id.find(id);
    if (it == by_id.end()) fail(ErrorKind::kPrecondition, "review item " + id + " not in dataset");
    lines.push_back({{"question_id", id}, {"question", it->second->question}, {"verdict", ""}, {"note", ""}});
  }
  write_jsonl(path, lines);
}

ReviewBatch import_review_batch(const std::filesystem::path& path) {
  const auto records = read_jsonl(path);
  if (records.empty() || !records.front().contains("header")) {
    fail(ErrorKind::kSchema, path.string() + ": missing review batch header");
  }
  ReviewBatch batch;
  try {
    const auto& h = records.front().at("header");
    batch.algorithm = h.at("algorithm").get<std::string>();
    batch.seed = h.at("seed").get<std::uint64_t>();
    batch.sample_rate = h.at("sample_rate").get<double>();
    batch.population = h.at("population").get<std::size_t>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::kSchema, path.string() + ": bad header: " + e.what());
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto where = path.string() + ": record " + std::to_string(i + 1);
    const auto& r = records[i];
    std::string id, verdict;
    try {
      id = r.at("question_id").get<std::string>();
      verdict = trim(r.value("verdict", std::string()));
    } catch (const Json::exception& e) {
      fail(ErrorKind::kSchema, where + ": " + e.what());
    }
    batch.items.push_back(id);
    if (verdict.empty()) continue;
    ReviewVerdict v;
    if (verdict == "accept") {
      v.decision = ReviewDecision::kAccept;
    } else if (verdict == "reject") {
      v.decision = ReviewDecision::kReject;
    } else {
      fail(ErrorKind::kSchema, where + ": verdict must be \"accept\" or \"reject\", got \"" + verdict + "\"");
    }
    v.note = r.value("note", std::string());
    batch.verdicts[id] = std::move(v);
  }
  return batch;
}

void apply_review(const ReviewBatch& batch, std::vector<SynthesizedQuestion>& qs) {
  std::map<std::string, SynthesizedQuestion*> by_id;
  for (auto& q : qs) by_id[q.id] = &q;
  for (const auto& [id, v] : batch.verdicts) {
    if (!by_id.count(id)) fail(ErrorKind::kPrecondition, "review verdict for unknown id " + id);
  }
  for (const auto& [id, v] : batch.verdicts) {
    if (v.decision == ReviewDecision::kReject) by_id[id]->status = QuestionStatus::kRejected;
  }
}

}  // namespace mixsynth
