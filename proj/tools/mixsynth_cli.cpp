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


#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mixsynth/mixsynth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

const char* kDescriptions[][2] = {
    {"pair", "embed the seed corpora and build question pairs"},
    {"generate", "synthesize hybrid and decomposed questions from the pairs"},
    {"verify", "run the six-rule verification over synthesized questions"},
    {"review-export", "sample verified questions for human review"},
    {"review-import", "apply an annotated review batch"},
    {"solve", "generate gated chain-of-thought solutions"},
    {"score", "assign 1-10 difficulty scores with the scorer model"},
    {"curriculum", "build the staged training set and export stage files"},
    {"stats", "print per-category counts"},
    {"run-all", "run every stage in order"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Difficulty-controlled math question synthesis and curriculum builder"};
  app.set_version_flag("--version", std::string(mixsynth_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool mock = false;
  bool resume = false;
  bool print_report = false;
  std::string review_file;

  auto* seed_opt = app.add_option("--seed", seed, "override the configured master seed");
  app.add_option("--config", config_path, "run configuration (INI)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--mock", mock, "use the offline mock for every provider role");
  app.add_flag("--resume", resume, "skip commands whose inputs and outputs are unchanged");
  app.add_flag("--report", print_report, "print the JSON run report");

  for (const auto& [name, help] : kDescriptions) {
    auto* sub = app.add_subcommand(name, help);
    if (std::string(name) == "review-import") {
      sub->add_option("--review", review_file, "annotated batch (default: <out>/review/batch.jsonl)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  mixsynth_options opts;
  mixsynth_options_init(&opts);
  opts.has_seed = seed_opt->count() > 0;
  opts.seed = seed;
  opts.force_mock = mock;
  opts.resume = resume;
  opts.review_file = review_file.empty() ? nullptr : review_file.c_str();

  mixsynth_pipeline* pipeline = nullptr;
  int rc = mixsynth_pipeline_open(&pipeline, config_path.c_str(), out_dir.c_str(), &opts);
  if (rc != MIXSYNTH_OK) {
    std::cerr << "mixsynth: " << mixsynth_status_name(rc) << ": " << mixsynth_last_error() << "\n";
    return kExitError;
  }
  rc = mixsynth_pipeline_run(pipeline, command.c_str());
  if (rc != MIXSYNTH_OK && rc != MIXSYNTH_PARTIAL) {
    std::cerr << "mixsynth " << command << ": " << mixsynth_status_name(rc) << ": "
              << mixsynth_last_error() << "\n";
    mixsynth_pipeline_close(pipeline);
    return kExitError;
  }

  if (print_report) std::cout << mixsynth_pipeline_last_report(pipeline) << "\n";
  if (command == "stats") {
    std::ifstream table(out_dir + "/stats.txt");
    std::cout << table.rdbuf();
  }
  std::cerr << "mixsynth " << command << ": " << mixsynth_status_name(rc) << "\n";
  mixsynth_pipeline_close(pipeline);
  return rc == MIXSYNTH_OK ? kExitOk : kExitPartial;
}
