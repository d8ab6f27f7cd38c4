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


#include "mixsynth/providers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "mixsynth/error.hpp"

namespace mixsynth {

const char* role_name(Role r) {
  switch (r) {
    case Role::kGenerator: return "generator";
    case Role::kVerifier: return "verifier";
    case Role::kSolver: return "solver";
    case Role::kScorer: return "scorer";
    case Role::kEmbedder: return "embedder";
  }
  return "unknown";
}

Role role_from_name(const std::string& name) {
  for (Role r : {Role::kGenerator, Role::kVerifier, Role::kSolver, Role::kScorer, Role::kEmbedder}) {
    if (name == role_name(r)) return r;
  }
  fail(ErrorKind::kConfig, "unknown provider role \"" + name + "\"");
}

ChatRequest default_request(Role role) {
  ChatRequest req;
  switch (role) {
    case Role::kGenerator:
      req.temperature = 0.7;
      req.max_output_tokens = 4096;
      break;
    case Role::kSolver:
      req.temperature = 0.6;
      req.top_p = 0.95;
      req.top_k = 40;
      req.min_p = 0.0;
      req.max_output_tokens = 32768;
      break;
    case Role::kVerifier:
    case Role::kScorer:
    case Role::kEmbedder:
      req.temperature = 0.0;
      req.max_output_tokens = 4096;
      break;
  }
  return req;
}

ChatRequest make_request(Role role, std::string user_content) {
  ChatRequest req = default_request(role);
  req.messages.push_back({"user", std::move(user_content)});
  return req;
}

void validate_request(const ChatRequest& req) {
  if (req.messages.empty()) fail(ErrorKind::kPrecondition, "chat request has no messages");
  if (!(req.temperature >= 0.0)) fail(ErrorKind::kPrecondition, "temperature must be >= 0");
  if (req.max_output_tokens <= 0) fail(ErrorKind::kPrecondition, "max_output_tokens must be > 0");
  if (req.top_p && !(*req.top_p > 0.0 && *req.top_p <= 1.0)) {
    fail(ErrorKind::kPrecondition, "top_p must lie in (0, 1]");
  }
  if (req.top_k && *req.top_k < 0) fail(ErrorKind::kPrecondition, "top_k must be >= 0");
  if (req.min_p && !(*req.min_p >= 0.0 && *req.min_p <= 1.0)) {
    fail(ErrorKind::kPrecondition, "min_p must lie in [0, 1]");
  }
}

Json chat_request_body(const ChatRequest& req, const std::string& model_tag) {
  Json messages = Json::array();
  for (const auto& m : req.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  Json body{{"model", model_tag},
            {"messages", std::move(messages)},
            {"temperature", req.temperature},
            {"max_tokens", req.max_output_tokens}};
  if (req.top_p) body["top_p"] = *req.top_p;
  if (req.top_k) body["top_k"] = *req.top_k;
  if (req.min_p) body["min_p"] = *req.min_p;
  if (req.seed) body["seed"] = *req.seed;
  return body;
}

void validate_provider_config(const ProviderConfig& cfg) {
  if (cfg.max_in_flight < 1) fail(ErrorKind::kConfig, "max_in_flight must be >= 1");
  if (cfg.max_retries < 0) fail(ErrorKind::kConfig, "max_retries must be >= 0");
  if (cfg.backoff_initial_ms < 0 || cfg.backoff_multiplier < 1.0) {
    fail(ErrorKind::kConfig, "backoff must have initial >= 0 and multiplier >= 1");
  }
  if (cfg.batch_size == 0) fail(ErrorKind::kConfig, "batch_size must be >= 1");
  if (cfg.model_tag.empty()) fail(ErrorKind::kConfig, "model_tag is empty");
}

bool is_retryable_status(int status) {
  return status == 0 || status == 408 || status == 429 || status >= 500;
}

// ---------------------------------------------------------------------------
// ResponseCache

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  std::ifstream in(dir_ / "index.tsv");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key, tag, bytes;
    if (std::getline(ss, key, '\t') && std::getline(ss, tag, '\t') && std::getline(ss, bytes)) {
      index_[key] = {tag, static_cast<std::size_t>(std::stoull(bytes))};
    }
  }
}

ResponseCache::~ResponseCache() {
  try {
    flush();
  } catch (...) {
  }
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / key;
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  const auto path = path_for(key);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  return read_text(path);
}

void ResponseCache::put(const std::string& key, const std::string& model_tag,
                        const std::string& text) {
  if (!enabled()) return;
  write_text(path_for(key), text);
  std::lock_guard lk(mu_);
  index_[key] = {model_tag, text.size()};
  dirty_ = true;
}

void ResponseCache::flush() {
  std::lock_guard lk(mu_);
  if (!enabled() || !dirty_) return;
  std::string buf;
  for (const auto& [key, entry] : index_) {
    buf += key + '\t' + entry.first + '\t' + std::to_string(entry.second) + '\n';
  }
  write_text(dir_ / "index.tsv", buf);
  dirty_ = false;
}

// ---------------------------------------------------------------------------
// Throttle

Throttle::Throttle(int max_in_flight, double min_interval_ms)
    : max_in_flight_(std::max(1, max_in_flight)),
      min_interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double, std::milli>(min_interval_ms))) {}

void Throttle::acquire() {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return in_flight_ < max_in_flight_; });
  ++in_flight_;
  const auto now = std::chrono::steady_clock::now();
  const auto start = std::max(now, next_start_);
  next_start_ = start + min_interval_;
  lk.unlock();
  if (start > now) std::this_thread::sleep_until(start);
}

void Throttle::release() {
  {
    std::lock_guard lk(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (count == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lk(err_mu);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// ChatProvider

ChatProvider::ChatProvider(ProviderConfig cfg, std::shared_ptr<Transport> transport)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      cache_(cfg_.cache_dir),
      throttle_(cfg_.max_in_flight, cfg_.min_interval_ms) {
  validate_provider_config(cfg_);
  if (!transport_) fail(ErrorKind::kConfig, "provider has no transport");
}

std::string attempt_variant(int attempt) {
  return attempt > 0 ? "attempt=" + std::to_string(attempt) : std::string();
}

std::string ChatProvider::cache_key(const ChatRequest& req, const std::string& variant) const {
  std::string material = cfg_.model_tag + "\n" + chat_request_body(req, cfg_.model_tag).dump();
  if (!variant.empty()) material += "\n#variant=" + variant;
  return sha256_hex(material);
}

std::string ChatProvider::call_with_retries(const std::string& path, const std::string& body) {
  double delay_ms = cfg_.backoff_initial_ms;
  for (int attempt = 0;; ++attempt) {
    HttpResponse resp;
    throttle_.acquire();
    ++transport_calls_;
    try {
      resp = transport_->post(path, body);
    } catch (const std::exception& e) {
      resp = {0, e.what()};
    }
    throttle_.release();
    if (resp.status >= 200 && resp.status < 300) return resp.body;
    if (!is_retryable_status(resp.status) || attempt >= cfg_.max_retries) {
      ++failures_;
      std::string detail = resp.body.substr(0, 200);
      fail(ErrorKind::kProvider, cfg_.model_tag + path + ": HTTP " + std::to_string(resp.status) +
                                     (attempt > 0 ? " after " + std::to_string(attempt) + " retries" : "") +
                                     (detail.empty() ? "" : ": " + detail));
    }
    ++retries_;
    if (delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_ms));
    }
    delay_ms *= cfg_.backoff_multiplier;
  }
}

std::string ChatProvider::chat(const ChatRequest& req, const std::string& variant) {
  ++requests_;
  validate_request(req);
  const auto key = cache_key(req, variant);
  if (auto hit = cache_.get(key)) {
    ++cache_hits_;
    return *hit;
  }
  const auto raw = call_with_retries("/chat/completions", chat_request_body(req, cfg_.model_tag).dump());
  std::string content;
  try {
    const auto j = Json::parse(raw);
    content = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    ++failures_;
    fail(ErrorKind::kProvider, "malformed chat response: " + std::string(e.what()));
  }
  cache_.put(key, cfg_.model_tag, content);
  return content;
}

std::vector<ChatOutcome> ChatProvider::chat_batch(const std::vector<ChatRequest>& reqs,
                                                 const std::string& variant) {
  std::vector<ChatOutcome> out(reqs.size());
  parallel_for(reqs.size(), cfg_.max_in_flight, [&](std::size_t i) {
    try {
      out[i].text = chat(reqs[i], variant);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

Telemetry ChatProvider::telemetry() const {
  return {requests_.load(), transport_calls_.load(), cache_hits_.load(), retries_.load(),
          failures_.load()};
}

// ---------------------------------------------------------------------------
// EmbeddingProvider

namespace {

ProviderConfig without_cache(ProviderConfig cfg) {
  cfg.cache_dir.clear();
  return cfg;
}

}  // namespace

EmbeddingProvider::EmbeddingProvider(ProviderConfig cfg, std::shared_ptr<Transport> transport)
    : cfg_(cfg), http_(without_cache(std::move(cfg)), std::move(transport)) {
  if (cfg_.cache_dir.empty()) return;
  std::error_code ec;
  if (!std::filesystem::exists(cache_file(), ec)) return;
  for (const auto& rec : read_jsonl(cache_file())) {
    try {
      cache_[{rec.at("question_hash").get<std::string>(), rec.at("model_tag").get<std::string>()}] =
          rec.at("vector").get<std::vector<double>>();
    } catch (const Json::exception& e) {
      fail(ErrorKind::kSchema, cache_file().string() + ": bad cache record: " + e.what());
    }
  }
}

EmbeddingProvider::~EmbeddingProvider() {
  try {
    flush();
  } catch (...) {
  }
}

std::filesystem::path EmbeddingProvider::cache_file() const {
  return cfg_.cache_dir / "embeddings.jsonl";
}

std::vector<EmbeddingVector> EmbeddingProvider::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) fail(ErrorKind::kPrecondition, "embed called with no texts");
  requests_ += texts.size();

  std::vector<std::string> hashes;
  hashes.reserve(texts.size());
  std::vector<std::size_t> missing;  // first occurrence of each uncached text
  {
    std::lock_guard lk(mu_);
    std::map<std::string, bool> seen;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      hashes.push_back(sha256_hex(texts[i]));
      if (cache_.count({hashes.back(), cfg_.model_tag})) {
        ++cache_hits_;
      } else if (!seen[hashes.back()]) {
        seen[hashes.back()] = true;
        missing.push_back(i);
      }
    }
  }

  const std::size_t batches = (missing.size() + cfg_.batch_size - 1) / cfg_.batch_size;
  parallel_for(batches, cfg_.max_in_flight, [&](std::size_t b) {
    const std::size_t begin = b * cfg_.batch_size;
    const std::size_t end = std::min(missing.size(), begin + cfg_.batch_size);
    Json input = Json::array();
    for (std::size_t k = begin; k < end; ++k) input.push_back(texts[missing[k]]);
    const Json body{{"model", cfg_.model_tag}, {"input", std::move(input)}};
    const auto raw = http_.call_with_retries("/embeddings", body.dump());

    std::vector<std::vector<double>> vectors(end - begin);
    try {
      const auto j = Json::parse(raw);
      const auto& data = j.at("data");
      if (data.size() != vectors.size()) {
        fail(ErrorKind::kProvider, "embeddings response has " + std::to_string(data.size()) +
                                       " vectors for " + std::to_string(vectors.size()) + " inputs");
      }
      for (std::size_t k = 0; k < data.size(); ++k) {
        const std::size_t idx = data[k].contains("index") ? data[k].at("index").get<std::size_t>() : k;
        if (idx >= vectors.size()) fail(ErrorKind::kProvider, "embeddings response index out of range");
        vectors[idx] = data[k].at("embedding").get<std::vector<double>>();
      }
    } catch (const Json::exception& e) {
      fail(ErrorKind::kProvider, "malformed embeddings response: " + std::string(e.what()));
    }
    std::lock_guard lk(mu_);
    for (std::size_t k = begin; k < end; ++k) {
      cache_[{hashes[missing[k]], cfg_.model_tag}] = std::move(vectors[k - begin]);
    }
    dirty_ = true;
  });

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::lock_guard lk(mu_);
  for (const auto& h : hashes) out.emplace_back(cache_.at({h, cfg_.model_tag}));
  return out;
}

Telemetry EmbeddingProvider::telemetry() const {
  auto t = http_.telemetry();
  t.requests = requests_.load();
  t.cache_hits = cache_hits_.load();
  return t;
}

void EmbeddingProvider::flush() {
  std::lock_guard lk(mu_);
  if (cfg_.cache_dir.empty() || !dirty_) return;
  std::vector<Json> records;
  records.reserve(cache_.size());
  for (const auto& [key, vec] : cache_) {
    records.push_back({{"question_hash", key.first}, {"model_tag", key.second}, {"vector", vec}});
  }
  write_jsonl(cache_file(), records);
  dirty_ = false;
}

}  // namespace mixsynth
