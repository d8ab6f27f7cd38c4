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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mixsynth/pairing.hpp"
#include "mixsynth/util.hpp"

namespace mixsynth {

enum class Role { kGenerator, kVerifier, kSolver, kScorer, kEmbedder };

const char* role_name(Role r);
Role role_from_name(const std::string& name);

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  std::optional<double> top_p;
  std::optional<int> top_k;
  std::optional<double> min_p;
  std::optional<std::uint64_t> seed;  // sampling seed, sent as "seed"
  int max_output_tokens = 4096;
};

/// Sampling defaults per role: generator 0.7/4096; solver 0.6, top-p 0.95,
/// top-k 40, min-p 0, 32768; verifier and scorer run greedy at 0.0/4096.
ChatRequest default_request(Role role);
ChatRequest make_request(Role role, std::string user_content);

void validate_request(const ChatRequest& req);

/// Chat-completions JSON body. Keys serialise in sorted order, so the dump
/// is canonical and doubles as the cache key material.
Json chat_request_body(const ChatRequest& req, const std::string& model_tag);

struct ProviderConfig {
  std::string endpoint;
  std::string model_tag = "mock";
  std::string auth_env;  // name of the variable holding the bearer token
  int max_in_flight = 8;
  int max_retries = 3;
  double backoff_initial_ms = 500.0;
  double backoff_multiplier = 2.0;
  double min_interval_ms = 0.0;  // per-provider spacing between transport calls
  std::size_t batch_size = 32;   // texts per embeddings request
  std::filesystem::path cache_dir;
};

void validate_provider_config(const ProviderConfig& cfg);

struct HttpResponse {
  int status = 0;  // 0 signals a transport-level failure
  std::string body;
};

/// Anything that can POST a JSON body to `<endpoint><path>`.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& body) = 0;
};

/// Live HTTP(S) transport. The bearer token is read from `auth_env` once at
/// construction; a named but unset variable is a configuration error.
std::shared_ptr<Transport> make_http_transport(const ProviderConfig& cfg);

bool is_retryable_status(int status);

struct Telemetry {
  std::uint64_t requests = 0;
  std::uint64_t transport_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t retries = 0;
  std::uint64_t failures = 0;
};

/// Content-addressed response store: one file per response under
/// `<dir>/<key[0:2]>/<key>`, plus an index rewritten in key order on flush.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);
  ~ResponseCache();
  ResponseCache(const ResponseCache&) = delete;
  ResponseCache& operator=(const ResponseCache&) = delete;

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& model_tag, const std::string& text);
  void flush();
  bool enabled() const { return !dir_.empty(); }

 private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::pair<std::string, std::size_t>> index_;
  bool dirty_ = false;
};

/// Caps concurrent transport calls and spaces their start times.
class Throttle {
 public:
  Throttle(int max_in_flight, double min_interval_ms);
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int max_in_flight_;
  int in_flight_ = 0;
  std::chrono::steady_clock::duration min_interval_;
  std::chrono::steady_clock::time_point next_start_{};
};

struct ChatOutcome {
  std::optional<std::string> text;
  std::string error;
};

class ChatProvider {
 public:
  ChatProvider(ProviderConfig cfg, std::shared_ptr<Transport> transport);

  /// Serves from cache when possible; otherwise calls the transport with
  /// retry and backoff. A non-empty `variant` asks for a distinct sample of
  /// an otherwise identical request; it is folded into the cache key only
  /// and never sent over the wire.
  std::string chat(const ChatRequest& req, const std::string& variant = {});

  /// Runs requests with at most max_in_flight in parallel. Results come
  /// back in input order regardless of completion order.
  std::vector<ChatOutcome> chat_batch(const std::vector<ChatRequest>& reqs,
                                      const std::string& variant = {});

  std::string cache_key(const ChatRequest& req, const std::string& variant = {}) const;
  Telemetry telemetry() const;
  const ProviderConfig& config() const { return cfg_; }
  void flush() { cache_.flush(); }

 private:
  std::string call_with_retries(const std::string& path, const std::string& body);

  ProviderConfig cfg_;
  std::shared_ptr<Transport> transport_;
  ResponseCache cache_;
  Throttle throttle_;
  std::atomic<std::uint64_t> requests_{0}, transport_calls_{0}, cache_hits_{0}, retries_{0},
      failures_{0};

  friend class EmbeddingProvider;
};

/// Batched embeddings with a per-text cache. The cache is a line-delimited
/// file `<cache_dir>/embeddings.jsonl` of {question_hash, model_tag, vector}.
class EmbeddingProvider {
 public:
  EmbeddingProvider(ProviderConfig cfg, std::shared_ptr<Transport> transport);
  ~EmbeddingProvider();

  /// Output order matches input order. Only uncached texts reach the
  /// transport. An empty input is a precondition error.
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);

  Telemetry telemetry() const;
  void flush();

 private:
  std::filesystem::path cache_file() const;

  ProviderConfig cfg_;
  ChatProvider http_;  // reused for retry/telemetry plumbing; its response cache is off
  std::mutex mu_;
  // (question_hash, model_tag) -> vector
  std::map<std::pair<std::string, std::string>, std::vector<double>> cache_;
  bool dirty_ = false;
  std::atomic<std::uint64_t> requests_{0}, cache_hits_{0};
};

/// Cache-key variant for a regeneration attempt ("" for the first).
std::string attempt_variant(int attempt);

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace mixsynth
