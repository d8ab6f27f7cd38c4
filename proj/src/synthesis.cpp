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


#include "mixsynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "mixsynth/error.hpp"
#include "mixsynth/prompts.hpp"

namespace mixsynth {

const char* category_name(Category c) {
  switch (c) {
    case Category::kDecomposed: return "decomposed";
    case Category::kOriginal: return "original";
    case Category::kHybrid: return "hybrid";
  }
  return "unknown";
}

Category category_from_name(const std::string& name) {
  for (Category c : {Category::kDecomposed, Category::kOriginal, Category::kHybrid}) {
    if (name == category_name(c)) return c;
  }
  fail(ErrorKind::kSchema, "unknown category \"" + name + "\"");
}

const char* status_name(QuestionStatus s) {
  switch (s) {
    case QuestionStatus::kUnverified: return "unverified";
    case QuestionStatus::kVerified: return "verified";
    case QuestionStatus::kRejected: return "rejected";
  }
  return "unknown";
}

QuestionStatus status_from_name(const std::string& name) {
  for (auto s : {QuestionStatus::kUnverified, QuestionStatus::kVerified, QuestionStatus::kRejected}) {
    if (name == status_name(s)) return s;
  }
  fail(ErrorKind::kSchema, "unknown status \"" + name + "\"");
}

Json question_to_json(const SynthesizedQuestion& q) {
  return Json{{"id", q.id},
              {"question", q.question},
              {"category", category_name(q.category)},
              {"nominal_difficulty", q.nominal_difficulty},
              {"parent_low_id", q.parent_low_id},
              {"parent_high_id", q.parent_high_id},
              {"raw_generation", q.raw_generation},
              {"status", status_name(q.status)}};
}

SynthesizedQuestion question_from_json(const Json& j) {
  SynthesizedQuestion q;
  try {
    q.id = j.at("id").get<std::string>();
    q.question = j.at("question").get<std::string>();
    q.category = category_from_name(j.at("category").get<std::string>());
    q.nominal_difficulty = j.at("nominal_difficulty").get<double>();
    q.parent_low_id = j.at("parent_low_id").get<std::string>();
    q.parent_high_id = j.at("parent_high_id").get<std::string>();
    q.raw_generation = j.value("raw_generation", std::string());
    q.status = status_from_name(j.at("status").get<std::string>());
  } catch (const Json::exception& e) {
    fail(ErrorKind::kSchema, std::string("bad synthesized-question record: ") + e.what());
  }
  return q;
}

void save_questions(const std::vector<SynthesizedQuestion>& qs, const std::filesystem::path& path) {
  std::vector<Json> records;
  records.reserve(qs.size());
  for (const auto& q : qs) records.push_back(question_to_json(q));
  write_jsonl(path, records);
}

std::vector<SynthesizedQuestion> load_questions(const std::filesystem::path& path) {
  std::vector<SynthesizedQuestion> qs;
  for (const auto& j : read_jsonl(path)) qs.push_back(question_from_json(j));
  return qs;
}

double nominal_difficulty(Category category, double d_low, double d_high,
                          const DifficultyFormula& formula) {
  if (!(d_low < d_high)) {
    fail(ErrorKind::kPrecondition, "nominal_difficulty needs d_low < d_high, got " +
                                       format_real(d_low) + " and " + format_real(d_high));
  }
  switch (category) {
    case Category::kHybrid:
      return d_high + formula.hybrid_offset;
    case Category::kDecomposed: {
      double mid = (d_low + d_high) / 2.0;
      if (formula.decomposed == DifficultyFormula::DecomposedRule::kFloorMean) mid = std::floor(mid);
      return std::clamp(mid, d_low, d_high);
    }
    case Category::kOriginal:
      break;
  }
  fail(ErrorKind::kPrecondition, "original items keep their seed difficulty");
}

std::string render_prompt(Category tmpl, const SeedProblem& low, const SeedProblem& high) {
  std::string_view instructions;
  switch (tmpl) {
    case Category::kHybrid: instructions = prompts::kHybridInstructions; break;
    case Category::kDecomposed: instructions = prompts::kDecomposedInstructions; break;
    case Category::kOriginal:
      fail(ErrorKind::kPrecondition, "there is no generation template for original items");
  }
  std::string out(instructions);
  out += "\n\n#Problem 1#:\n";
  out += high.question;
  out += "\nAnswer 1: " + high.answer;
  out += "\nDifficulty 1: " + format_real(high.difficulty);
  out += "\n\n#Problem 2#:\n";
  out += low.question;
  out += "\nAnswer 2: " + low.answer;
  out += "\nDifficulty 2: " + format_real(low.difficulty);
  out += "\n";
  return out;
}

std::string render_prompt(Category tmpl, const QuestionPair& pair, const Corpus& corpus) {
  const auto* low = corpus.find(pair.low_id);
  const auto* high = corpus.find(pair.high_id);
  if (low == nullptr || high == nullptr) {
    fail(ErrorKind::kPrecondition, "pair references an id outside the corpus");
  }
  return render_prompt(tmpl, *low, *high);
}

bool mentions_source_problems(const std::string& text) {
  return text.find("Problem 1") != std::string::npos || text.find("Problem 2") != std::string::npos;
}

bool has_multiple_choice_markers(const std::string& text) {
  int distinct = 0;
  for (const char* marker : {"(A)", "(B)", "(C)", "(D)"}) {
    if (text.find(marker) != std::string::npos) ++distinct;
  }
  return distinct >= 2;
}

std::string parse_generation(const std::string& output, Category tmpl) {
  (void)tmpl;  // both templates share the same output header
  const auto pos = output.rfind(prompts::kNewProblemHeader);
  if (pos == std::string::npos) fail(ErrorKind::kParse, "missing \"#New Problem#:\" header");
  std::string body = trim(std::string_view(output).substr(pos + prompts::kNewProblemHeader.size()));
  if (body.empty()) fail(ErrorKind::kParse, "empty problem body");

  static const std::regex kTrailingHeader(R"((^|\n)[ \t]*#[A-Za-z][A-Za-z \-]*#[ \t]*:?)");
  if (std::regex_search(body, kTrailingHeader)) {
    fail(ErrorKind::kParse, "commentary section after the new problem");
  }
  if (mentions_source_problems(body)) fail(ErrorKind::kParse, "new problem mentions Problem 1/2");
  if (has_multiple_choice_markers(body)) fail(ErrorKind::kParse, "new problem is multiple-choice");
  return body;
}

std::string synthesized_id(Category tmpl, const std::string& seed_id) {
  switch (tmpl) {
    case Category::kHybrid: return "hyb-" + seed_id;
    case Category::kDecomposed: return "dec-" + seed_id;
    case Category::kOriginal: return "orig-" + seed_id;
  }
  return seed_id;
}

SynthesisResult synthesize_category(const Corpus& c, const std::vector<QuestionPair>& pairs,
                                    Category tmpl, ChatProvider& provider,
                                    const SynthesisConfig& cfg) {
  if (tmpl == Category::kOriginal) {
    fail(ErrorKind::kPrecondition, "original items are not synthesized");
  }
  std::vector<const SeedProblem*> seeds;
  for (const auto& p : c.problems) seeds.push_back(&p);
  std::sort(seeds.begin(), seeds.end(),
            [](const SeedProblem* a, const SeedProblem* b) { return a->id < b->id; });

  struct Job {
    const SeedProblem* seed;
    QuestionPair pair;
    ChatRequest request;
    std::optional<std::string> result;
    std::string raw;
    std::string error;
  };
  std::vector<Job> jobs;
  // Seed index -> job index, or -1 for a skipped seed.
  std::vector<long> job_of(seeds.size(), -1);
  SynthesisResult out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto pair = select_generation_pair(seeds[i]->id, pairs);
    if (!pair) continue;
    job_of[i] = static_cast<long>(jobs.size());
    auto request = make_request(Role::kGenerator, render_prompt(tmpl, *pair, c));
    // Sampling seed derived from the seed question id.
    request.seed = hash_seed(seeds[i]->id);
    jobs.push_back({seeds[i], *pair, std::move(request), {}, {}, {}});
  }

  for (int attempt = 0; attempt <= cfg.parse_retries; ++attempt) {
    std::vector<std::size_t> pending;
    std::vector<ChatRequest> reqs;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (!jobs[k].result) {
        pending.push_back(k);
        reqs.push_back(jobs[k].request);
      }
    }
    if (pending.empty()) break;
    const auto outcomes = provider.chat_batch(reqs, attempt_variant(attempt));
    for (std::size_t r = 0; r < pending.size(); ++r) {
      auto& job = jobs[pending[r]];
      if (!outcomes[r].text) {
        job.error = "provider: " + outcomes[r].error;
        continue;
      }
      job.raw = *outcomes[r].text;
      try {
        job.result = parse_generation(job.raw, tmpl);
      } catch (const Error& e) {
        job.error = std::string("parse: ") + e.what();
      }
    }
  }

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (job_of[i] < 0) {
      out.skips.push_back({seeds[i]->id, "no generation pair"});
      continue;
    }
    const auto& job = jobs[static_cast<std::size_t>(job_of[i])];
    if (!job.result) {
      out.skips.push_back({seeds[i]->id, job.error});
      ++out.failures;
      continue;
    }
    SynthesizedQuestion q;
    q.id = synthesized_id(tmpl, seeds[i]->id);
    q.question = *job.result;
    q.category = tmpl;
    q.nominal_difficulty =
        nominal_difficulty(tmpl, job.pair.low_difficulty, job.pair.high_difficulty, cfg.formula);
    q.parent_low_id = job.pair.low_id;
    q.parent_high_id = job.pair.high_id;
    q.raw_generation = job.raw;
    q.status = QuestionStatus::kUnverified;
    out.questions.push_back(std::move(q));
  }
  return out;
}

}  // namespace mixsynth
