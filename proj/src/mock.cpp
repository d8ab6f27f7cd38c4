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


#include "mixsynth/mock.hpp"

#include <cctype>
#include <cmath>
#include <random>
#include <set>

#include "mixsynth/error.hpp"
#include "mixsynth/prompts.hpp"

namespace mixsynth {

namespace {

// Text between the last `open` marker and the following `close` marker.
std::string between(const std::string& text, const std::string& open, const std::string& close) {
  const auto start = text.rfind(open);
  if (start == std::string::npos) return {};
  const auto begin = start + open.size();
  const auto end = close.empty() ? std::string::npos : text.find(close, begin);
  return trim(std::string_view(text).substr(begin, end == std::string::npos ? std::string::npos : end - begin));
}

std::string tag8(const std::string& prompt, std::optional<std::uint64_t> sampling_seed,
                 std::uint64_t seed) {
  std::string material = prompt + "\x1f" + std::to_string(seed);
  if (sampling_seed) material += "\x1f" + std::to_string(*sampling_seed);
  return sha256_hex(material).substr(0, 8);
}

std::size_t word_count(const std::string& text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char ch : text) {
    const bool space = std::isspace(ch) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::string generator_text(const std::string& prompt, std::optional<std::uint64_t> sampling_seed,
                           std::uint64_t seed) {
  const auto first = between(prompt, "#Problem 1#:\n", "\nAnswer 1:");
  const auto second = between(prompt, "#Problem 2#:\n", "\nAnswer 2:");
  const auto tag = tag8(prompt, sampling_seed, seed);
  if (prompt.rfind(prompts::kHybridInstructions.substr(0, 20), 0) == 0) {
    return "#Core Elements#:\n- Harder source: " + first + "\n- Easier source: " + second +
           "\n\n#Scenario Integration#:\nBoth settings are placed in one scenario whose answer "
           "requires the result of each part.\n\n#New Problem#:\n" +
           first + " In the same setting, " + second +
           " Report the sum of the two results as the final answer. (scenario " + tag + ")";
  }
  return "#Core Elements#:\n- Harder source: " + first + "\n- Easier source: " + second +
         "\n\n#Simplification Strategy#:\nThe harder setting is kept while one reasoning step "
         "is removed, following the easier setting.\n\n#New Problem#:\n" +
         first + " Assume the intermediate quantity is already known. (variant " + tag + ")";
}

std::string verifier_text() {
  std::string out;
  for (const char* dim : {"Clarity", "Completeness", "Formatting", "Relevance", "Solvability",
                          "Logical Flow"}) {
    out += std::string(dim) + ": PASS\n";
  }
  out += "Rationale: all rules are satisfied.\n";
  return out;
}

std::string solver_text(const std::string& prompt, std::optional<std::uint64_t> sampling_seed,
                        std::uint64_t seed) {
  const auto target = between(prompt, "Target problem:\n", "");
  auto answer = between(prompt, "The verified final answer to this problem is: ",
                        ". Derive it with");
  if (answer.empty()) {
    std::string material = target + "\x1f" + std::to_string(seed);
    if (sampling_seed) material += "\x1f" + std::to_string(*sampling_seed);
    answer = std::to_string(hash_seed(material) % 1000);
  }
  return "First we restate what is being asked and list the given quantities.\n"
         "Next we set up the relation that links them, taking care with units.\n"
         "Then we carry out the arithmetic one step at a time and check each result.\n"
         "Finally we confirm the value satisfies every condition in the statement.\n"
         "Therefore the answer is \\boxed{" +
         answer + "}.";
}

std::string scorer_text(const std::string& prompt, std::uint64_t seed) {
  const auto problem = between(prompt, "\n\nProblem:\n", "");
  double score = 3.0 + std::min(4.0, static_cast<double>(word_count(problem)) / 20.0);
  if (problem.find("(scenario ") != std::string::npos) score += 2.0;
  if (problem.find("(variant ") != std::string::npos) score -= 1.5;
  score += static_cast<double>(hash_seed(problem + "\x1f" + std::to_string(seed)) % 5) / 10.0;
  score = std::round(std::clamp(score, 1.0, 10.0) * 10.0) / 10.0;
  return "Difficulty: " + format_real(score) + "/10";
}

const std::set<std::string>& stop_words() {
  static const std::set<std::string> kStop = {"a",  "an", "and", "are", "as", "at",  "be",
                                              "by", "for", "if", "in",  "is", "it",  "of",
                                              "on", "or", "the", "to",  "what", "with"};
  return kStop;
}

std::string last_user_content(const Json& body) {
  const auto& messages = body.at("messages");
  if (!messages.is_array() || messages.empty()) fail(ErrorKind::kSchema, "request has no messages");
  return messages.back().at("content").get<std::string>();
}

class MockChatTransport : public Transport {
 public:
  MockChatTransport(Role role, std::uint64_t seed) : role_(role), seed_(seed) {}

  HttpResponse post(const std::string& path, const std::string& body) override {
    if (path != "/chat/completions") return {404, "unknown path " + path};
    try {
      const auto req = Json::parse(body);
      std::optional<std::uint64_t> sampling_seed;
      if (req.contains("seed")) sampling_seed = req.at("seed").get<std::uint64_t>();
      return {200, chat_completion_body(mock_chat_text(role_, last_user_content(req), sampling_seed, seed_))};
    } catch (const std::exception& e) {
      return {400, e.what()};
    }
  }

 private:
  Role role_;
  std::uint64_t seed_;
};

class MockEmbeddingTransport : public Transport {
 public:
  MockEmbeddingTransport(std::size_t dimension, std::uint64_t seed) : dimension_(dimension), seed_(seed) {}

  HttpResponse post(const std::string& path, const std::string& body) override {
    if (path != "/embeddings") return {404, "unknown path " + path};
    try {
      const auto req = Json::parse(body);
      Json data = Json::array();
      const auto& input = req.at("input");
      for (std::size_t i = 0; i < input.size(); ++i) {
        data.push_back({{"index", i},
                        {"embedding", mock_embedding(input[i].get<std::string>(), dimension_, seed_)}});
      }
      return {200, Json{{"data", std::move(data)}}.dump()};
    } catch (const std::exception& e) {
      return {400, e.what()};
    }
  }

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::map<std::string, std::string> fixtures) : fixtures_(std::move(fixtures)) {}

  HttpResponse post(const std::string&, const std::string& body) override {
    const auto it = fixtures_.find(sha256_hex(body));
    if (it == fixtures_.end()) return {404, "no fixture for request"};
    return {200, chat_completion_body(it->second)};
  }

 private:
  std::map<std::string, std::string> fixtures_;
};

}  // namespace

std::string mock_chat_text(Role role, const std::string& prompt,
                           std::optional<std::uint64_t> sampling_seed, std::uint64_t seed) {
  switch (role) {
    case Role::kGenerator: return generator_text(prompt, sampling_seed, seed);
    case Role::kVerifier: return verifier_text();
    case Role::kSolver: return solver_text(prompt, sampling_seed, seed);
    case Role::kScorer: return scorer_text(prompt, seed);
    case Role::kEmbedder: break;
  }
  fail(ErrorKind::kPrecondition, "the embedder role has no chat mock");
}

std::vector<double> mock_embedding(const std::string& text, std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) fail(ErrorKind::kPrecondition, "mock embedding dimension must be positive");
  std::vector<std::string> words;
  std::string current;
  for (char ch : text + " ") {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) || u >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      if (!stop_words().count(current)) words.push_back(current);
      current.clear();
    }
  }
  if (words.empty()) words.push_back(text);

  std::vector<double> v(dimension, 0.0);
  for (const auto& w : words) {
    std::mt19937_64 rng(hash_seed(w + "\x1f" + std::to_string(seed)));
    for (auto& x : v) x += static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

std::shared_ptr<Transport> make_mock_chat_transport(Role role, std::uint64_t seed) {
  return std::make_shared<MockChatTransport>(role, seed);
}

std::shared_ptr<Transport> make_mock_embedding_transport(std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) fail(ErrorKind::kConfig, "mock embedding dimension must be positive");
  return std::make_shared<MockEmbeddingTransport>(dimension, seed);
}

std::shared_ptr<Transport> make_fixture_transport(std::map<std::string, std::string> fixtures) {
  return std::make_shared<FixtureTransport>(std::move(fixtures));
}

std::string chat_completion_body(const std::string& text) {
  return Json{{"choices", Json::array({{{"index", 0},
                                        {"message", {{"role", "assistant"}, {"content", text}}},
                                        {"finish_reason", "stop"}}})}}
      .dump();
}

}  // namespace mixsynth
