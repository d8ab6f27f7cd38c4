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


#include "mixsynth/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <sstream>

#include "mixsynth/error.hpp"

namespace mixsynth {

namespace pt = boost::property_tree;

namespace {

constexpr Role kRoles[] = {Role::kGenerator, Role::kVerifier, Role::kSolver, Role::kScorer,
                           Role::kEmbedder};

class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : tree_) {
      if (!used_.count(key)) fail(ErrorKind::kConfig, "[" + name_ + "] unknown key \"" + key + "\"");
    }
  }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    const auto child = tree_.get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  void read(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }

  void read(const std::string& key, bool& out) {
    auto v = raw(key);
    if (!v) return;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") {
      out = true;
    } else if (*v == "false" || *v == "0" || *v == "no" || *v == "off") {
      out = false;
    } else {
      bad(key, *v, "a boolean");
    }
  }

  void read(const std::string& key, double& out) {
    auto v = raw(key);
    if (!v) return;
    const auto* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) bad(key, *v, "a number");
  }

  template <typename Int>
  bool read_int(const std::string& key, Int& out) {
    auto v = raw(key);
    if (!v) return false;
    const auto* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) bad(key, *v, "an integer");
    return true;
  }

  const std::string& name() const { return name_; }

 private:
  [[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
    fail(ErrorKind::kConfig, "[" + name_ + "] " + key + " = \"" + value + "\" is not " + what);
  }

  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void read_provider(Section& sec, RoleSettings& rs) {
  auto& p = rs.provider;
  sec.read("endpoint", p.endpoint);
  sec.read("model", p.model_tag);
  sec.read("auth_env", p.auth_env);
  sec.read_int("max_in_flight", p.max_in_flight);
  sec.read_int("max_retries", p.max_retries);
  sec.read("backoff_initial_ms", p.backoff_initial_ms);
  sec.read("backoff_multiplier", p.backoff_multiplier);
  sec.read("min_interval_ms", p.min_interval_ms);
  sec.read_int("batch_size", p.batch_size);
  sec.read("mock", rs.mock);
  sec.read_int("mock_dimension", rs.mock_dimension);
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::kConfig, std::string("config: ") + e.what());
  }

  RunConfig cfg;
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      fail(ErrorKind::kConfig, "config key \"" + name + "\" must sit inside a section");
    }
    Section sec(name, body);
    if (name == "run") {
      sec.read_int("seed", cfg.seed);
      sec.read("mock", cfg.mock);
      std::string cache = cfg.cache_dir.string();
      sec.read("cache_dir", cache);
      cfg.cache_dir = cache;
    } else if (name == "seeds") {
      for (const auto& [tag, value] : body) {
        cfg.seeds.push_back({tag, resolve(base_dir, *sec.raw(tag))});
      }
    } else if (name == "pairing") {
      sec.read("tau", cfg.pairing.tau);
      sec.read_int("max_pairs_per_question", cfg.pairing.max_pairs_per_question);
      cfg.pairing_seed_set = sec.read_int("seed", cfg.pairing.seed);
    } else if (name == "synthesis") {
      sec.read("hybrid", cfg.hybrid);
      sec.read("decomposed", cfg.decomposed);
      sec.read("hybrid_offset", cfg.synthesis.formula.hybrid_offset);
      sec.read_int("parse_retries", cfg.synthesis.parse_retries);
      std::string rule;
      sec.read("decomposed_rule", rule);
      if (rule == "mean") {
        cfg.synthesis.formula.decomposed = DifficultyFormula::DecomposedRule::kMean;
      } else if (!rule.empty() && rule != "floor_mean") {
        fail(ErrorKind::kConfig, "[synthesis] decomposed_rule must be floor_mean or mean");
      }
    } else if (name == "quality") {
      sec.read("review_rate", cfg.review_rate);
      cfg.review_seed_set = sec.read_int("review_seed", cfg.review_seed);
    } else if (name == "solver") {
      sec.read("require_boxed", cfg.gates.require_boxed);
      sec.read("max_duplicate_2gram_ratio", cfg.gates.max_duplicate_2gram_ratio);
      sec.read("max_duplicate_3gram_ratio", cfg.gates.max_duplicate_3gram_ratio);
      sec.read_int("max_consecutive_repeat", cfg.gates.max_consecutive_repeat);
      sec.read_int("max_attempts", cfg.gates.max_attempts);
    } else if (name == "curriculum") {
      auto& c = cfg.curriculum;
      sec.read("mode", c.mode);
      sec.read_int("grouping", c.grouping);
      sec.read("scorer", c.scorer);
      sec.read("allow_empty", c.allow_empty);
      sec.read("per_item", c.per_item);
      std::string external;
      sec.read("external", external);
      for (const auto& p : split_list(external)) c.external.push_back(resolve(base_dir, p));
    } else if (name.rfind("provider:", 0) == 0) {
      const Role role = role_from_name(name.substr(9));
      auto& rs = cfg.providers[role];
      if (rs.declared) fail(ErrorKind::kConfig, "duplicate section [" + name + "]");
      rs.declared = true;
      read_provider(sec, rs);
    } else {
      fail(ErrorKind::kConfig, "unknown config section [" + name + "]");
    }
  }
  apply_seed(cfg, cfg.seed);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorKind::kConfig, "config file " + path.string() + " does not exist");
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  return parse_run_config(read_text(path), base);
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  if (!cfg.pairing_seed_set) cfg.pairing.seed = seed;
  if (!cfg.review_seed_set) cfg.review_seed = seed;
}

std::set<Role> required_roles(const RunConfig& cfg) {
  std::set<Role> roles{Role::kEmbedder, Role::kVerifier, Role::kSolver};
  if (cfg.hybrid || cfg.decomposed) roles.insert(Role::kGenerator);
  if (cfg.curriculum.scorer || cfg.curriculum.mode == "blended") roles.insert(Role::kScorer);
  return roles;
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.seeds.empty()) fail(ErrorKind::kConfig, "[seeds] lists no seed corpus");
  for (const auto& s : cfg.seeds) {
    if (!std::filesystem::exists(s.path)) {
      fail(ErrorKind::kConfig, "seed corpus " + s.tag + " at " + s.path.string() + " does not exist");
    }
  }
  try {
    validate_pairing_config(cfg.pairing);
    validate_gate_config(cfg.gates);
  } catch (const Error& e) {
    fail(ErrorKind::kConfig, e.what());
  }
  if (!cfg.hybrid && !cfg.decomposed) {
    fail(ErrorKind::kConfig, "[synthesis] enables neither hybrid nor decomposed generation");
  }
  if (cfg.synthesis.parse_retries < 0) fail(ErrorKind::kConfig, "[synthesis] parse_retries must be >= 0");
  if (!(cfg.review_rate > 0.0 && cfg.review_rate <= 1.0)) {
    fail(ErrorKind::kConfig, "[quality] review_rate must lie in (0, 1]");
  }
  const auto& c = cfg.curriculum;
  if (c.mode != "pure" && c.mode != "blended") {
    fail(ErrorKind::kConfig, "[curriculum] mode must be pure or blended");
  }
  if (c.grouping < 1) fail(ErrorKind::kConfig, "[curriculum] grouping must be >= 1");
  if (c.mode == "pure" && !c.external.empty()) {
    fail(ErrorKind::kConfig, "[curriculum] external datasets need mode = blended");
  }
  for (const auto& p : c.external) {
    if (!std::filesystem::exists(p)) {
      fail(ErrorKind::kConfig, "external dataset " + p.string() + " does not exist");
    }
  }
  for (Role role : required_roles(cfg)) {
    const auto it = cfg.providers.find(role);
    const bool mock = cfg.mock || (it != cfg.providers.end() && it->second.mock);
    if (it == cfg.providers.end() && !mock) {
      fail(ErrorKind::kConfig, std::string("no [provider:") + role_name(role) + "] section");
    }
    const RoleSettings rs = it == cfg.providers.end() ? RoleSettings{} : it->second;
    if (!mock && rs.provider.endpoint.empty()) {
      fail(ErrorKind::kConfig, std::string("[provider:") + role_name(role) + "] needs an endpoint or mock = true");
    }
    if (mock && rs.mock_dimension == 0) {
      fail(ErrorKind::kConfig, std::string("[provider:") + role_name(role) + "] mock_dimension must be positive");
    }
    try {
      validate_provider_config(rs.provider);
    } catch (const Error& e) {
      fail(ErrorKind::kConfig, std::string("[provider:") + role_name(role) + "] " + e.what());
    }
  }
}

std::string render_run_config(const RunConfig& cfg) {
  pt::ptree tree;
  auto put = [&tree](const std::string& section, const std::string& key, const std::string& value) {
    auto& sec = tree.get_child_optional(pt::ptree::path_type(section, '\0'))
                    ? tree.get_child(pt::ptree::path_type(section, '\0'))
                    : tree.push_back({section, pt::ptree()})->second;
    sec.push_back({key, pt::ptree(value)});
  };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };

  put("run", "seed", std::to_string(cfg.seed));
  put("run", "mock", b(cfg.mock));
  put("run", "cache_dir", cfg.cache_dir.generic_string());
  for (const auto& s : cfg.seeds) put("seeds", s.tag, s.path.generic_string());
  put("pairing", "tau", format_real(cfg.pairing.tau));
  put("pairing", "max_pairs_per_question", std::to_string(cfg.pairing.max_pairs_per_question));
  put("pairing", "seed", std::to_string(cfg.pairing.seed));
  put("synthesis", "hybrid", b(cfg.hybrid));
  put("synthesis", "decomposed", b(cfg.decomposed));
  put("synthesis", "hybrid_offset", format_real(cfg.synthesis.formula.hybrid_offset));
  put("synthesis", "decomposed_rule",
      cfg.synthesis.formula.decomposed == DifficultyFormula::DecomposedRule::kMean ? "mean" : "floor_mean");
  put("synthesis", "parse_retries", std::to_string(cfg.synthesis.parse_retries));
  put("quality", "review_rate", format_real(cfg.review_rate));
  put("quality", "review_seed", std::to_string(cfg.review_seed));
  put("solver", "require_boxed", b(cfg.gates.require_boxed));
  put("solver", "max_duplicate_2gram_ratio", format_real(cfg.gates.max_duplicate_2gram_ratio));
  put("solver", "max_duplicate_3gram_ratio", format_real(cfg.gates.max_duplicate_3gram_ratio));
  put("solver", "max_consecutive_repeat", std::to_string(cfg.gates.max_consecutive_repeat));
  put("solver", "max_attempts", std::to_string(cfg.gates.max_attempts));
  const auto& c = cfg.curriculum;
  put("curriculum", "mode", c.mode);
  put("curriculum", "grouping", std::to_string(c.grouping));
  put("curriculum", "scorer", b(c.scorer));
  put("curriculum", "allow_empty", b(c.allow_empty));
  put("curriculum", "per_item", b(c.per_item));
  std::string external;
  for (const auto& p : c.external) external += (external.empty() ? "" : ",") + p.generic_string();
  put("curriculum", "external", external);

  for (Role role : kRoles) {
    const auto it = cfg.providers.find(role);
    if (it == cfg.providers.end()) continue;
    const auto& rs = it->second;
    const auto& p = rs.provider;
    const std::string sec = std::string("provider:") + role_name(role);
    put(sec, "endpoint", p.endpoint);
    put(sec, "model", p.model_tag);
    put(sec, "auth_env", p.auth_env);
    put(sec, "max_in_flight", std::to_string(p.max_in_flight));
    put(sec, "max_retries", std::to_string(p.max_retries));
    put(sec, "backoff_initial_ms", format_real(p.backoff_initial_ms));
    put(sec, "backoff_multiplier", format_real(p.backoff_multiplier));
    put(sec, "min_interval_ms", format_real(p.min_interval_ms));
    put(sec, "batch_size", std::to_string(p.batch_size));
    put(sec, "mock", b(rs.mock));
    put(sec, "mock_dimension", std::to_string(rs.mock_dimension));
  }
  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace mixsynth
