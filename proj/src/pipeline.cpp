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


#include "mixsynth/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>

#include "mixsynth/curriculum.hpp"
#include "mixsynth/error.hpp"
#include "mixsynth/mock.hpp"
#include "mixsynth/quality.hpp"
#include "mixsynth/solver.hpp"

namespace mixsynth {

namespace fs = std::filesystem;

namespace {

constexpr const char* kNoPair = "no generation pair";

// Command that produces each prerequisite artifact, for error messages.
const std::map<std::string, std::string>& producers() {
  static const std::map<std::string, std::string> kProducers = {
      {artifacts::kSeeds, "pair"},          {artifacts::kPairs, "pair"},
      {artifacts::kHybrid, "generate"},     {artifacts::kDecomposed, "generate"},
      {artifacts::kOriginal, "generate"},   {artifacts::kVerified, "verify"},
      {artifacts::kReviewBatch, "review-export"}, {artifacts::kItems, "solve"},
      {artifacts::kScores, "score"}};
  return kProducers;
}

Json telemetry_json(const Telemetry& t) {
  return Json{{"requests", t.requests},
              {"transport_calls", t.transport_calls},
              {"cache_hits", t.cache_hits},
              {"retries", t.retries},
              {"failures", t.failures}};
}

std::vector<Category> synthesized_categories(const RunConfig& cfg) {
  std::vector<Category> out;
  if (cfg.decomposed) out.push_back(Category::kDecomposed);
  if (cfg.hybrid) out.push_back(Category::kHybrid);
  return out;
}

const char* synth_file(Category c) {
  switch (c) {
    case Category::kDecomposed: return artifacts::kDecomposed;
    case Category::kOriginal: return artifacts::kOriginal;
    case Category::kHybrid: return artifacts::kHybrid;
  }
  return "";
}

}  // namespace

Json CommandReport::to_json() const {
  return Json{{"command", command},
              {"status", status == RunStatus::kOk ? "ok" : "partial"},
              {"counts", counts},
              {"failures", failures},
              {"warnings", warnings},
              {"inputs", inputs},
              {"outputs", outputs},
              {"telemetry", telemetry},
              {"duration_ms", duration_ms},
              {"resumed", resumed}};
}

int exit_code(RunStatus status) { return status == RunStatus::kOk ? 0 : 3; }

const std::vector<std::string>& Pipeline::commands() {
  static const std::vector<std::string> kCommands = {
      "pair",  "generate", "verify",     "review-export", "review-import",
      "solve", "score",    "curriculum", "stats",         "run-all"};
  return kCommands;
}

Pipeline::Pipeline(RunConfig cfg, fs::path out_dir, PipelineOptions opts)
    : cfg_(std::move(cfg)), out_(fs::absolute(out_dir).lexically_normal()), opts_(std::move(opts)) {
  if (opts_.seed) apply_seed(cfg_, *opts_.seed);
  if (opts_.force_mock) cfg_.mock = true;
  validate_run_config(cfg_);
}

CommandReport Pipeline::run(const std::string& command) {
  static const std::map<std::string, Step> kSteps = {
      {"pair", &Pipeline::cmd_pair},
      {"generate", &Pipeline::cmd_generate},
      {"verify", &Pipeline::cmd_verify},
      {"review-export", &Pipeline::cmd_review_export},
      {"review-import", &Pipeline::cmd_review_import},
      {"solve", &Pipeline::cmd_solve},
      {"score", &Pipeline::cmd_score},
      {"curriculum", &Pipeline::cmd_curriculum},
      {"stats", &Pipeline::cmd_stats},
      {"run-all", &Pipeline::cmd_run_all}};
  const auto step = kSteps.find(command);
  if (step == kSteps.end()) fail(ErrorKind::kPrecondition, "unknown command \"" + command + "\"");

  fs::create_directories(out_);
  const auto config_path = path(artifacts::kConfig);
  const auto rendered = render_run_config(cfg_);
  if (!fs::exists(config_path) || read_text(config_path) != rendered) write_text(config_path, rendered);

  CommandReport r;
  r.command = command;
  if (opts_.resume && command != "run-all" && can_resume(command, r)) return r;

  const auto start = std::chrono::steady_clock::now();
  record_input(r, config_path);
  (this->*(step->second))(r);
  if (!r.failures.empty()) r.status = RunStatus::kPartial;
  r.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  write_text(path(artifacts::kLogs) / (command + ".json"), r.to_json().dump(2) + "\n");
  return r;
}

fs::path Pipeline::require(CommandReport& r, const std::string& rel) const {
  const auto p = path(rel);
  if (!fs::exists(p)) {
    std::string msg = "missing prerequisite artifact " + p.string();
    if (auto it = producers().find(rel); it != producers().end()) {
      msg += " (produced by `" + it->second + "`)";
    }
    fail(ErrorKind::kMissingArtifact, msg);
  }
  record_input(r, p);
  return p;
}

void Pipeline::record_input(CommandReport& r, const fs::path& p) const {
  const auto rel = p.lexically_relative(out_);
  const bool inside = !rel.empty() && *rel.begin() != "..";
  r.inputs[inside ? rel.generic_string() : p.generic_string()] = sha256_hex(read_text(p));
}

void Pipeline::record_output(CommandReport& r, const std::string& rel) const {
  r.outputs[rel] = sha256_hex(read_text(path(rel)));
}

bool Pipeline::can_resume(const std::string& command, CommandReport& r) const {
  const auto log = path(artifacts::kLogs) / (command + ".json");
  if (!fs::exists(log)) return false;
  Json j;
  try {
    j = Json::parse(read_text(log));
  } catch (const Json::exception&) {
    return false;
  }
  if (j.value("status", "") != "ok") return false;
  auto unchanged = [this](const Json& files) {
    for (const auto& [name, digest] : files.items()) {
      const fs::path p(name);
      const auto full = p.is_absolute() ? p : path(name);
      if (!fs::exists(full) || sha256_hex(read_text(full)) != digest.get<std::string>()) return false;
    }
    return true;
  };
  if (!unchanged(j.at("inputs")) || !unchanged(j.at("outputs"))) return false;
  r.counts = j.at("counts");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  r.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  r.resumed = true;
  return true;
}

ProviderConfig Pipeline::provider_config(Role role) const {
  ProviderConfig pc;
  if (auto it = cfg_.providers.find(role); it != cfg_.providers.end()) pc = it->second.provider;
  if (!cfg_.cache_dir.empty()) {
    const auto root = cfg_.cache_dir.is_absolute() ? cfg_.cache_dir : out_ / cfg_.cache_dir;
    pc.cache_dir = root / role_name(role);
  }
  return pc;
}

bool Pipeline::is_mock(Role role) const {
  if (cfg_.mock) return true;
  const auto it = cfg_.providers.find(role);
  return it != cfg_.providers.end() && it->second.mock;
}

std::unique_ptr<ChatProvider> Pipeline::chat_provider(Role role) const {
  const auto pc = provider_config(role);
  auto transport = is_mock(role) ? make_mock_chat_transport(role, cfg_.seed) : make_http_transport(pc);
  return std::make_unique<ChatProvider>(pc, std::move(transport));
}

std::unique_ptr<EmbeddingProvider> Pipeline::embedding_provider() const {
  const auto pc = provider_config(Role::kEmbedder);
  std::shared_ptr<Transport> transport;
  if (is_mock(Role::kEmbedder)) {
    const auto it = cfg_.providers.find(Role::kEmbedder);
    const std::size_t dim = it != cfg_.providers.end() ? it->second.mock_dimension : RoleSettings{}.mock_dimension;
    transport = make_mock_embedding_transport(dim, cfg_.seed);
  } else {
    transport = make_http_transport(pc);
  }
  return std::make_unique<EmbeddingProvider>(pc, std::move(transport));
}

// ---------------------------------------------------------------------------

void Pipeline::cmd_pair(CommandReport& r) {
  std::vector<Corpus> parts;
  for (const auto& s : cfg_.seeds) {
    record_input(r, s.path);
    auto c = load_corpus(s.path, s.tag);
    for (auto& p : c.problems) {
      if (p.source == s.tag) continue;
      p.extra["record_source"] = p.source;
      p.source = s.tag;
    }
    parts.push_back(std::move(c));
  }
  const auto merged = merge_corpora(parts, "seeds");
  save_corpus(merged, path(artifacts::kSeeds));

  std::vector<std::string> texts;
  texts.reserve(merged.problems.size());
  for (const auto& p : merged.problems) texts.push_back(p.question);
  auto embedder = embedding_provider();
  const auto vectors = embedder->embed(texts);
  embedder->flush();
  EmbeddingMap embeddings;
  for (std::size_t i = 0; i < vectors.size(); ++i) embeddings[merged.problems[i].id] = vectors[i];

  std::vector<QuestionPair> pairs;
  Json per_source = Json::object();
  for (const auto& part : parts) {
    const auto ps = build_pairs(part, embeddings, cfg_.pairing);
    std::set<std::string> paired;
    for (const auto& p : ps) {
      paired.insert(p.low_id);
      paired.insert(p.high_id);
    }
    per_source[part.name] = {{"seeds", part.problems.size()},
                             {"pairs", ps.size()},
                             {"paired_questions", paired.size()}};
    if (paired.size() < part.problems.size()) {
      r.warnings.push_back(std::to_string(part.problems.size() - paired.size()) + " of " +
                           std::to_string(part.problems.size()) + " " + part.name +
                           " seeds have no partner above tau");
    }
    pairs.insert(pairs.end(), ps.begin(), ps.end());
  }
  std::sort(pairs.begin(), pairs.end(), [](const QuestionPair& a, const QuestionPair& b) {
    return std::tie(a.low_id, a.high_id) < std::tie(b.low_id, b.high_id);
  });
  save_pairs(pairs, path(artifacts::kPairs));
  if (auto w = tau_band_warning(cfg_.pairing.tau)) r.warnings.push_back(*w);

  r.counts = {{"seeds", merged.problems.size()}, {"pairs", pairs.size()}, {"per_source", per_source}};
  r.telemetry[role_name(Role::kEmbedder)] = telemetry_json(embedder->telemetry());
  record_output(r, artifacts::kSeeds);
  record_output(r, artifacts::kPairs);
}

void Pipeline::cmd_generate(CommandReport& r) {
  const auto corpus = load_corpus(require(r, artifacts::kSeeds), "");
  const auto pairs = load_pairs(require(r, artifacts::kPairs), corpus);
  auto generator = chat_provider(Role::kGenerator);

  std::vector<Json> skips;
  for (Category cat : synthesized_categories(cfg_)) {
    const auto res = synthesize_category(corpus, pairs, cat, *generator, cfg_.synthesis);
    save_questions(res.questions, path(synth_file(cat)));
    record_output(r, synth_file(cat));
    std::size_t unpaired = 0;
    for (const auto& s : res.skips) {
      skips.push_back({{"category", category_name(cat)}, {"seed_id", s.seed_id}, {"reason", s.reason}});
      if (s.reason == kNoPair) {
        ++unpaired;
      } else {
        r.failures.push_back(std::string(category_name(cat)) + " " + s.seed_id + ": " + s.reason);
      }
    }
    if (unpaired > 0) {
      r.warnings.push_back(std::string(category_name(cat)) + ": " + std::to_string(unpaired) +
                           " seeds skipped without a generation pair");
    }
    r.counts[category_name(cat)] = res.questions.size();
  }
  generator->flush();

  std::vector<SynthesizedQuestion> originals;
  for (const auto& p : corpus.problems) {
    SynthesizedQuestion q;
    q.id = synthesized_id(Category::kOriginal, p.id);
    q.question = p.question;
    q.category = Category::kOriginal;
    q.nominal_difficulty = p.difficulty;
    q.parent_low_id = p.id;
    q.parent_high_id = p.id;
    q.status = QuestionStatus::kVerified;
    originals.push_back(std::move(q));
  }
  std::sort(originals.begin(), originals.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  save_questions(originals, path(artifacts::kOriginal));
  write_jsonl(path(artifacts::kSkips), skips);
  r.counts["original"] = originals.size();
  r.counts["skipped"] = skips.size();
  r.telemetry[role_name(Role::kGenerator)] = telemetry_json(generator->telemetry());
  record_output(r, artifacts::kOriginal);
  record_output(r, artifacts::kSkips);
}

void Pipeline::cmd_verify(CommandReport& r) {
  std::vector<SynthesizedQuestion> qs;
  for (Category cat : synthesized_categories(cfg_)) {
    auto part = load_questions(require(r, synth_file(cat)));
    qs.insert(qs.end(), part.begin(), part.end());
  }
  auto verifier = chat_provider(Role::kVerifier);
  const auto run = verify_all(qs, *verifier);
  verifier->flush();

  save_questions(qs, path(artifacts::kVerified));
  std::vector<Json> verdicts, failures;
  std::size_t structural = 0;
  for (const auto& v : run.verdicts) {
    verdicts.push_back(verdict_to_json(v));
    if (v.structural) ++structural;
  }
  for (const auto& [id, reason] : run.failures) {
    failures.push_back({{"question_id", id}, {"reason", reason}});
    r.failures.push_back(id + ": " + reason);
  }
  write_jsonl(path(artifacts::kVerdicts), verdicts);
  write_jsonl(path(artifacts::kVerifyFailures), failures);
  // A fresh verification supersedes any earlier review outcome.
  if (fs::remove(path(artifacts::kReviewed))) {
    r.warnings.push_back(std::string("removed stale ") + artifacts::kReviewed);
  }

  std::map<std::string, std::size_t> by_status;
  for (const auto& q : qs) ++by_status[status_name(q.status)];
  r.counts = {{"questions", qs.size()}, {"structural_rejects", structural}};
  for (const auto& [status, n] : by_status) r.counts[status] = n;
  r.telemetry[role_name(Role::kVerifier)] = telemetry_json(verifier->telemetry());
  record_output(r, artifacts::kVerified);
  record_output(r, artifacts::kVerdicts);
  record_output(r, artifacts::kVerifyFailures);
}

void Pipeline::cmd_review_export(CommandReport& r) {
  const auto qs = load_questions(require(r, artifacts::kVerified));
  std::vector<std::string> population;
  for (const auto& q : qs) {
    if (q.status == QuestionStatus::kVerified) population.push_back(q.id);
  }
  std::sort(population.begin(), population.end());
  const auto batch = sample_for_review(population, cfg_.review_rate, cfg_.review_seed);
  export_review_batch(batch, qs, path(artifacts::kReviewBatch));
  r.counts = {{"population", batch.population}, {"sampled", batch.items.size()}};
  record_output(r, artifacts::kReviewBatch);
}

void Pipeline::cmd_review_import(CommandReport& r) {
  auto qs = load_questions(require(r, artifacts::kVerified));
  fs::path file;
  if (opts_.review_file.empty()) {
    file = require(r, artifacts::kReviewBatch);
  } else {
    file = fs::absolute(opts_.review_file);
    if (!fs::exists(file)) fail(ErrorKind::kMissingArtifact, "review file " + file.string() + " does not exist");
    record_input(r, file);
  }
  const auto batch = import_review_batch(file);
  if (batch.algorithm != kReviewSamplerId) {
    r.warnings.push_back("review batch was drawn with " + batch.algorithm);
  }
  apply_review(batch, qs);
  save_questions(qs, path(artifacts::kReviewed));
  std::size_t rejected = 0;
  for (const auto& [id, v] : batch.verdicts) rejected += v.decision == ReviewDecision::kReject ? 1 : 0;
  r.counts = {{"sampled", batch.items.size()},
              {"reviewed", batch.verdicts.size()},
              {"rejected", rejected},
              {"accepted", batch.verdicts.size() - rejected}};
  record_output(r, artifacts::kReviewed);
}

void Pipeline::cmd_solve(CommandReport& r) {
  const auto corpus = load_corpus(require(r, artifacts::kSeeds), "");
  const auto originals = load_questions(require(r, artifacts::kOriginal));
  require(r, artifacts::kVerified);
  const bool reviewed = fs::exists(path(artifacts::kReviewed));
  const auto synthesized = load_questions(require(r, reviewed ? artifacts::kReviewed : artifacts::kVerified));

  std::map<std::string, const SynthesizedQuestion*> by_id;
  std::vector<const SynthesizedQuestion*> order;
  for (const auto* list : {&synthesized, &originals}) {
    for (const auto& q : *list) {
      if (q.status != QuestionStatus::kVerified) continue;
      by_id[q.id] = &q;
      order.push_back(&q);
    }
  }
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::make_pair(static_cast<int>(a->category), a->id) <
           std::make_pair(static_cast<int>(b->category), b->id);
  });

  std::vector<SolveJob> jobs;
  jobs.reserve(order.size());
  for (const auto* q : order) {
    const auto* low = corpus.find(q->parent_low_id);
    const auto* high = corpus.find(q->parent_high_id);
    if (low == nullptr || high == nullptr) {
      fail(ErrorKind::kPrecondition, "question " + q->id + " names a parent missing from " + artifacts::kSeeds);
    }
    jobs.push_back({q->id, q->category == Category::kOriginal ? render_solution_prompt(*low)
                                                              : render_solution_prompt(*q, *low, *high)});
  }
  auto solver = chat_provider(Role::kSolver);
  const auto records = solve_jobs(jobs, *solver, cfg_.gates);
  solver->flush();

  std::vector<Json> solutions, gates, items;
  std::map<std::string, std::map<std::string, std::size_t>> tally;
  for (const auto& rec : records) {
    const auto& q = *by_id.at(rec.question_id);
    auto sj = solution_to_json(rec);
    sj["category"] = category_name(q.category);
    solutions.push_back(std::move(sj));
    gates.push_back({{"question_id", rec.question_id},
                     {"attempts", rec.attempts},
                     {"gates", gate_report_to_json(rec.gate_report)},
                     {"error", rec.error}});
    const bool ok = rec.status == SolutionStatus::kAccepted;
    ++tally[category_name(q.category)][ok ? "accepted" : "failed"];
    if (ok) {
      GradedItem item{q.id, q.question, rec.solution_text, category_label(q.category), q.nominal_difficulty, {}};
      items.push_back(item_to_json(item));
    } else {
      r.failures.push_back(rec.question_id + ": " +
                           (rec.error.empty() ? "gates failed after " + std::to_string(rec.attempts) + " attempts"
                                              : rec.error));
    }
  }
  write_jsonl(path(artifacts::kSolutions), solutions);
  write_jsonl(path(artifacts::kGateReport), gates);
  write_jsonl(path(artifacts::kItems), items);
  r.counts = {{"jobs", jobs.size()}, {"accepted", items.size()}, {"per_category", tally},
              {"reviewed_input", reviewed}};
  r.telemetry[role_name(Role::kSolver)] = telemetry_json(solver->telemetry());
  record_output(r, artifacts::kSolutions);
  record_output(r, artifacts::kGateReport);
  record_output(r, artifacts::kItems);
}

void Pipeline::cmd_score(CommandReport& r) {
  auto items = load_items(require(r, artifacts::kItems));
  for (const auto& p : cfg_.curriculum.external) {
    record_input(r, p);
    for (auto& item : load_items(p)) {
      if (!item.difficulty_score) items.push_back(std::move(item));
    }
  }
  auto scorer = chat_provider(Role::kScorer);
  const auto run = score_difficulty(items, *scorer);
  scorer->flush();

  std::vector<Json> scores, missing;
  for (const auto& s : run.scores) {
    scores.push_back({{"question_id", s.question_id}, {"score", s.score}, {"scorer_tag", s.scorer_tag}});
  }
  for (const auto& id : run.missing) {
    missing.push_back({{"question_id", id}});
    r.failures.push_back(id + ": no parseable difficulty score");
  }
  write_jsonl(path(artifacts::kScores), scores);
  write_jsonl(path(artifacts::kMissingScores), missing);
  r.warnings.insert(r.warnings.end(), run.warnings.begin(), run.warnings.end());
  r.counts = {{"items", items.size()}, {"scored", scores.size()}, {"missing", missing.size()}};
  r.telemetry[role_name(Role::kScorer)] = telemetry_json(scorer->telemetry());
  record_output(r, artifacts::kScores);
  record_output(r, artifacts::kMissingScores);
}

void Pipeline::cmd_curriculum(CommandReport& r) {
  const auto& cc = cfg_.curriculum;
  const auto items = load_items(require(r, artifacts::kItems));
  CurriculumPlan plan;
  if (cc.mode == "pure") {
    plan = build_pure_curriculum(items, cc.allow_empty);
  } else {
    std::vector<std::vector<GradedItem>> datasets{items};
    std::map<std::string, double> scores;
    for (const auto& p : cc.external) {
      record_input(r, p);
      datasets.push_back(load_items(p));
      for (const auto& item : datasets.back()) {
        if (item.difficulty_score) scores[item.question_id] = *item.difficulty_score;
      }
    }
    for (const auto& j : read_jsonl(require(r, artifacts::kScores))) {
      scores[j.at("question_id").get<std::string>()] = j.at("score").get<double>();
    }
    plan = build_blended_curriculum(datasets, scores, {cc.grouping, cc.per_item});
  }

  const auto dir = path(artifacts::kCurriculumDir);
  fs::remove_all(dir);
  export_sft_stages(plan, dir, cc.allow_empty);

  Json stages = Json::array();
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    const auto& st = plan.stages[s];
    stages.push_back({{"name", st.name}, {"size", st.items.size()}, {"mean_difficulty", st.mean_difficulty}});
    record_output(r, std::string(artifacts::kCurriculumDir) + "/stage" + std::to_string(s + 1) + ".jsonl");
  }
  r.counts = {{"mode", cc.mode}, {"stages", stages}};
  r.warnings.insert(r.warnings.end(), plan.warnings.begin(), plan.warnings.end());
  record_output(r, artifacts::kManifest);
}

void Pipeline::cmd_stats(CommandReport& r) {
  const auto corpus = load_corpus(require(r, artifacts::kSeeds), "");
  std::vector<std::string> columns;
  for (const auto& s : cfg_.seeds) columns.push_back(s.tag);
  std::set<std::string> extra;
  for (const auto& p : corpus.problems) {
    if (std::find(columns.begin(), columns.end(), p.source) == columns.end()) extra.insert(p.source);
  }
  columns.insert(columns.end(), extra.begin(), extra.end());

  std::vector<Category> cats{Category::kDecomposed, Category::kOriginal, Category::kHybrid};
  Json rows = Json::array();
  std::map<std::string, std::size_t> total_by_source;
  std::size_t grand_total = 0;
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"Dataset"};
  header.insert(header.end(), columns.begin(), columns.end());
  header.push_back("Total");
  table.push_back(header);

  auto add_row = [&](const std::string& label, const std::map<std::string, std::size_t>& counts,
                     std::size_t total) {
    Json per = Json::object();
    std::vector<std::string> line{label};
    for (const auto& col : columns) {
      const auto it = counts.find(col);
      const std::size_t n = it == counts.end() ? 0 : it->second;
      per[col] = n;
      line.push_back(std::to_string(n));
    }
    line.push_back(std::to_string(total));
    table.push_back(line);
    return Json{{"dataset", label}, {"counts", per}, {"total", total}};
  };

  for (Category cat : cats) {
    const bool enabled = cat == Category::kOriginal || (cat == Category::kHybrid ? cfg_.hybrid : cfg_.decomposed);
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    if (enabled) {
      for (const auto& q : load_questions(require(r, synth_file(cat)))) {
        const auto* parent = corpus.find(q.parent_high_id);
        if (parent == nullptr) fail(ErrorKind::kPrecondition, "question " + q.id + " has an unknown parent");
        ++counts[parent->source];
        ++total_by_source[parent->source];
        ++total;
      }
    }
    grand_total += total;
    std::string name = category_name(cat);
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    rows.push_back(add_row("MathMixupQA (" + name + ")", counts, total));
  }
  const auto total_row = add_row("MathMixupQA", total_by_source, grand_total);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());
  }
  std::ostringstream text;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == table.size() - 1 || i == 1) {
      for (std::size_t k = 0; k < width.size(); ++k) text << (k ? "-+-" : "") << std::string(width[k], '-');
      text << "\n";
    }
    for (std::size_t k = 0; k < table[i].size(); ++k) {
      text << (k ? " | " : "");
      if (k == 0) {
        text << std::left << std::setw(static_cast<int>(width[k])) << table[i][k];
      } else {
        text << std::right << std::setw(static_cast<int>(width[k])) << table[i][k];
      }
    }
    text << "\n";
  }

  Json stats{{"columns", columns}, {"rows", rows}, {"total", total_row}};
  write_text(path(artifacts::kStatsJson), stats.dump(2) + "\n");
  write_text(path(artifacts::kStatsText), text.str());
  r.counts = stats;
  record_output(r, artifacts::kStatsJson);
  record_output(r, artifacts::kStatsText);
}

void Pipeline::cmd_run_all(CommandReport& r) {
  std::vector<std::string> steps{"pair", "generate", "verify", "review-export", "solve"};
  if (cfg_.curriculum.scorer || cfg_.curriculum.mode == "blended") steps.push_back("score");
  steps.push_back("curriculum");
  steps.push_back("stats");

  Json summary = Json::array();
  for (const auto& step : steps) {
    const auto sub = run(step);
    summary.push_back({{"command", step},
                       {"status", sub.status == RunStatus::kOk ? "ok" : "partial"},
                       {"resumed", sub.resumed},
                       {"failures", sub.failures.size()}});
    for (const auto& f : sub.failures) r.failures.push_back(step + ": " + f);
    for (const auto& w : sub.warnings) r.warnings.push_back(step + ": " + w);
    if (!sub.telemetry.empty()) r.telemetry[step] = sub.telemetry;
    for (const auto& [k, v] : sub.outputs) r.outputs[k] = v;
  }
  r.counts = {{"steps", summary}};
}

}  // namespace mixsynth
