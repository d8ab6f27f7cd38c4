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
#include <set>
#include <string>
#include <vector>

#include "mixsynth/pairing.hpp"
#include "mixsynth/providers.hpp"
#include "mixsynth/solver.hpp"
#include "mixsynth/synthesis.hpp"

namespace mixsynth {

struct SeedSource {
  std::string tag;
  std::filesystem::path path;
};

struct RoleSettings {
  ProviderConfig provider;
  bool mock = false;
  std::size_t mock_dimension = 256;  // embedder only
  bool declared = false;             // a [provider:<role>] section exists
};

struct CurriculumSettings {
  std::string mode = "pure";  // pure | blended
  int grouping = 2;           // categories per stage in blended mode
  bool scorer = false;
  bool allow_empty = false;
  bool per_item = false;
  std::vector<std::filesystem::path> external;  // graded item files merged in blended mode
};

/// Declarative description of one pipeline run. Relative seed and external
/// paths resolve against the config file's directory; a relative cache_dir
/// resolves against the output directory.
struct RunConfig {
  std::uint64_t seed = 0;
  bool mock = false;
  std::filesystem::path cache_dir = "cache";
  std::vector<SeedSource> seeds;
  PairingConfig pairing;
  bool pairing_seed_set = false;
  bool hybrid = true;
  bool decomposed = true;
  SynthesisConfig synthesis;
  double review_rate = 0.10;
  std::uint64_t review_seed = 0;
  bool review_seed_set = false;
  GateConfig gates;
  CurriculumSettings curriculum;
  std::map<Role, RoleSettings> providers;
};

/// Parses INI text. Unknown sections and keys are configuration errors.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Replaces the master seed; pairing and review seeds not set explicitly follow it.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

/// Roles some enabled stage needs.
std::set<Role> required_roles(const RunConfig& cfg);

/// Checks ranges, that referenced files exist, and that every required role
/// has a usable provider (mock, or a live endpoint).
void validate_run_config(const RunConfig& cfg);

/// Effective configuration as INI text, keys in a fixed order.
std::string render_run_config(const RunConfig& cfg);

}  // namespace mixsynth
