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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixsynth/config.hpp"
#include "mixsynth/providers.hpp"

namespace mixsynth {

struct PipelineOptions {
  std::optional<std::uint64_t> seed;  // overrides [run] seed
  bool force_mock = false;
  bool resume = false;                // skip commands whose logged inputs and outputs are unchanged
  std::filesystem::path review_file;  // annotated batch for review-import
};

enum class RunStatus { kOk, kPartial };

/// Machine-readable outcome of one command, also written to logs/<command>.json.
struct CommandReport {
  std::string command;
  RunStatus status = RunStatus::kOk;
  Json counts = Json::object();
  std::vector<std::string> failures;  // item-level failures
  std::vector<std::string> warnings;
  std::map<std::string, std::string> inputs;   // artifact -> sha256
  std::map<std::string, std::string> outputs;  // artifact -> sha256
  Json telemetry = Json::object();
  double duration_ms = 0.0;
  bool resumed = false;

  Json to_json() const;
};

/// Output-tree layout, relative to the run directory.
namespace artifacts {
inline constexpr const char* kConfig = "config.ini";
inline constexpr const char* kSeeds = "seeds.jsonl";
inline constexpr const char* kPairs = "pairs.jsonl";
inline constexpr const char* kHybrid = "synth/hybrid.jsonl";
inline constexpr const char* kDecomposed = "synth/decomposed.jsonl";
inline constexpr const char* kOriginal = "synth/original.jsonl";
inline constexpr const char* kSkips = "synth/skips.jsonl";
inline constexpr const char* kVerified = "verify/questions.jsonl";
inline constexpr const char* kVerdicts = "verify/verdicts.jsonl";
inline constexpr const char* kVerifyFailures = "verify/failures.jsonl";
inline constexpr const char* kReviewBatch = "review/batch.jsonl";
inline constexpr const char* kReviewed = "review/questions.jsonl";
inline constexpr const char* kSolutions = "solve/solutions.jsonl";
inline constexpr const char* kGateReport = "solve/gate_report.jsonl";
inline constexpr const char* kItems = "solve/items.jsonl";
inline constexpr const char* kScores = "score/scores.jsonl";
inline constexpr const char* kMissingScores = "score/missing.jsonl";
inline constexpr const char* kCurriculumDir = "curriculum";
inline constexpr const char* kManifest = "curriculum/manifest.json";
inline constexpr const char* kStatsJson = "stats.json";
inline constexpr const char* kStatsText = "stats.txt";
inline constexpr const char* kLogs = "logs";
}  // namespace artifacts

/// Runs pipeline commands against one output directory. Each command reads
/// only artifacts of earlier stages and fails naming the first one missing.
class Pipeline {
 public:
  Pipeline(RunConfig cfg, std::filesystem::path out_dir, PipelineOptions opts = {});

  /// One of commands(). Item-level failures yield kPartial; anything that
  /// stops the command throws mixsynth::Error.
  CommandReport run(const std::string& command);

  static const std::vector<std::string>& commands();
  const RunConfig& config() const { return cfg_; }
  const std::filesystem::path& out_dir() const { return out_; }

 private:
  using Step = void (Pipeline::*)(CommandReport&);

  void cmd_pair(CommandReport& r);
  void cmd_generate(CommandReport& r);
  void cmd_verify(CommandReport& r);
  void cmd_review_export(CommandReport& r);
  void cmd_review_import(CommandReport& r);
  void cmd_solve(CommandReport& r);
  void cmd_score(CommandReport& r);
  void cmd_curriculum(CommandReport& r);
  void cmd_stats(CommandReport& r);
  void cmd_run_all(CommandReport& r);

  std::filesystem::path path(const std::string& rel) const { return out_ / rel; }
  std::filesystem::path require(CommandReport& r, const std::string& rel) const;
  void record_input(CommandReport& r, const std::filesystem::path& p) const;
  void record_output(CommandReport& r, const std::string& rel) const;
  bool can_resume(const std::string& command, CommandReport& r) const;

  std::unique_ptr<ChatProvider> chat_provider(Role role) const;
  std::unique_ptr<EmbeddingProvider> embedding_provider() const;
  ProviderConfig provider_config(Role role) const;
  bool is_mock(Role role) const;

  RunConfig cfg_;
  std::filesystem::path out_;
  PipelineOptions opts_;
};

/// Process exit code for a command outcome: 0 ok, 3 partial.
int exit_code(RunStatus status);

}  // namespace mixsynth
