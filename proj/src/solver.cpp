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


#include "mixsynth/solver.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "mixsynth/error.hpp"
#include "mixsynth/prompts.hpp"

namespace mixsynth {

void validate_gate_config(const GateConfig& cfg) {
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(cfg.max_duplicate_2gram_ratio) || !in_unit(cfg.max_duplicate_3gram_ratio)) {
    fail(ErrorKind::kConfig, "n-gram ratio thresholds must lie in [0, 1]");
  }
  if (cfg.max_attempts < 1) fail(ErrorKind::kConfig, "max_attempts must be >= 1");
}

std::optional<std::string> extract_boxed(const std::string& text) {
  static constexpr std::string_view kToken = "\\boxed{";
  const auto pos = text.rfind(kToken);
  if (pos == std::string::npos) return std::nullopt;
  const std::size_t begin = pos + kToken.size();
  int depth = 1;
  for (std::size_t i = begin; i < text.size(); ++i) {
    if (text[i] == '{') {
      ++depth;
    } else if (text[i] == '}' && --depth == 0) {
      auto content = trim(std::string_view(text).substr(begin, i - begin));
      if (content.empty()) return std::nullopt;
      return content;
    }
  }
  return std::nullopt;
}

std::vector<std::string> ngram_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (u < 0x80 && std::isspace(u)) {
      flush();
    } else if (u < 0x80 && std::ispunct(u)) {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      current.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : ch);
    }
  }
  flush();
  return tokens;
}

NgramStats ngram_degeneracy(const std::string& text, std::size_t n) {
  if (n == 0) fail(ErrorKind::kPrecondition, "n-gram order must be positive");
  NgramStats s;
  const auto tokens = ngram_tokens(text);
  if (tokens.size() < n) return s;
  s.total = tokens.size() - n + 1;

  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> gram(s.total);
  for (std::size_t i = 0; i < s.total; ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    gram[i] = ids.emplace(std::move(key), ids.size()).first->second;
  }
  s.distinct = ids.size();
  s.duplicate_ratio = 1.0 - static_cast<double>(s.distinct) / static_cast<double>(s.total);

  std::vector<std::size_t> run(s.total, 1);
  for (std::size_t i = s.total; i-- > 0;) {
    if (i + n < s.total && gram[i] == gram[i + n]) run[i] = run[i + n] + 1;
    s.max_consecutive = std::max(s.max_consecutive, run[i]);
  }
  return s;
}

GateReport check_gates(const std::string& solution, const GateConfig& cfg) {
  GateReport r;
  r.boxed_present = solution.find("\\boxed{") != std::string::npos;
  r.final_answer = extract_boxed(solution);
  r.bigram = ngram_degeneracy(solution, 2);
  r.trigram = ngram_degeneracy(solution, 3);
  r.boxed_ok = !cfg.require_boxed || r.final_answer.has_value();
  r.bigram_ok = r.bigram.duplicate_ratio <= cfg.max_duplicate_2gram_ratio;
  r.trigram_ok = r.trigram.duplicate_ratio <= cfg.max_duplicate_3gram_ratio;
  r.repeat_ok = std::max(r.bigram.max_consecutive, r.trigram.max_consecutive) <=
                cfg.max_consecutive_repeat;
  return r;
}

Json gate_report_to_json(const GateReport& r) {
  auto stats = [](const NgramStats& s) {
    return Json{{"total", s.total},
                {"distinct", s.distinct},
                {"duplicate_ratio", s.duplicate_ratio},
                {"max_consecutive", s.max_consecutive}};
  };
  return Json{{"boxed_present", r.boxed_present},
              {"boxed_ok", r.boxed_ok},
              {"bigram", stats(r.bigram)},
              {"bigram_ok", r.bigram_ok},
              {"trigram", stats(r.trigram)},
              {"trigram_ok", r.trigram_ok},
              {"repeat_ok", r.repeat_ok},
              {"passed", r.passed()}};
}

std::string render_solution_prompt(const SynthesizedQuestion& q, const SeedProblem& low,
                                   const SeedProblem& high) {
  if (low.id != q.parent_low_id || high.id != q.parent_high_id) {
    fail(ErrorKind::kPrecondition, "parents (" + low.id + ", " + high.id +
                                       ") do not match the recorded parents of " + q.id);
  }
  std::string out(prompts::kSolutionInstructions);
  out += "\n\n";
  out += prompts::kSolutionReferenceNote;
  out += "\n\nRelated problem A:\n" + low.question;
  out += "\nAnswer A: " + low.answer;
  out += "\n\nRelated problem B:\n" + high.question;
  out += "\nAnswer B: " + high.answer;
  out += "\n\nTarget problem:\n" + q.question + "\n";
  return out;
}

std::string render_solution_prompt(const SeedProblem& original) {
  std::string out(prompts::kSolutionInstructions);
  out += "\n\nThe verified final answer to this problem is: " + original.answer +
         ". Derive it with a complete step-by-step solution; do not simply restate it.";
  out += "\n\nTarget problem:\n" + original.question + "\n";
  return out;
}

Json solution_to_json(const SolutionRecord& r) {
  return Json{{"question_id", r.question_id},
              {"solution", r.solution_text},
              {"final_answer", r.final_answer},
              {"attempts", r.attempts},
              {"status", r.status == SolutionStatus::kAccepted ? "accepted" : "failed"}};
}

std::vector<SolutionRecord> solve_jobs(const std::vector<SolveJob>& jobs, ChatProvider& provider,
                                       const GateConfig& cfg) {
  validate_gate_config(cfg);
  std::vector<SolutionRecord> records(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) records[i].question_id = jobs[i].question_id;

  parallel_for(jobs.size(), provider.config().max_in_flight, [&](std::size_t i) {
    auto& rec = records[i];
    const auto req = make_request(Role::kSolver, jobs[i].prompt);
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
      rec.attempts = attempt + 1;
      std::string text;
      try {
        text = provider.chat(req, attempt_variant(attempt));
      } catch (const std::exception& e) {
        rec.error = e.what();
        continue;
      }
      rec.error.clear();
      rec.solution_text = std::move(text);
      rec.gate_report = check_gates(rec.solution_text, cfg);
      if (rec.gate_report.passed()) {
        rec.status = SolutionStatus::kAccepted;
        rec.final_answer = rec.gate_report.final_answer.value_or("");
        return;
      }
    }
    rec.status = SolutionStatus::kFailed;
  });
  return records;
}

SolutionRecord solve_with_gates(const SynthesizedQuestion& q,
                                const std::pair<SeedProblem, SeedProblem>& parents,
                                ChatProvider& provider, const GateConfig& cfg) {
  if (q.status != QuestionStatus::kVerified) {
    fail(ErrorKind::kPrecondition, "question " + q.id + " is " + status_name(q.status) +
                                       ", only verified questions are solved");
  }
  const SolveJob job{q.id, render_solution_prompt(q, parents.first, parents.second)};
  return solve_jobs({job}, provider, cfg).front();
}

}  // namespace mixsynth
