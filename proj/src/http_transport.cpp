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


#include "httplib.h"

#include <cstdlib>

#include "mixsynth/error.hpp"
#include "mixsynth/providers.hpp"

namespace mixsynth {

namespace {

class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string base, std::string prefix, std::string token)
      : base_(std::move(base)), prefix_(std::move(prefix)), token_(std::move(token)) {}

  HttpResponse post(const std::string& path, const std::string& body) override {
    // One httplib client per call.
    httplib::Client client(base_);
    client.set_connection_timeout(30);
    client.set_read_timeout(900);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    auto res = client.Post(prefix_ + path, headers, body, "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }

 private:
  std::string base_;
  std::string prefix_;
  std::string token_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(const ProviderConfig& cfg) {
  if (cfg.endpoint.empty()) fail(ErrorKind::kConfig, "provider endpoint is empty");
  const auto scheme = cfg.endpoint.find("://");
  if (scheme == std::string::npos) {
    fail(ErrorKind::kConfig, "endpoint must include a scheme: " + cfg.endpoint);
  }
  const auto slash = cfg.endpoint.find('/', scheme + 3);
  std::string base = cfg.endpoint.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : cfg.endpoint.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  std::string token;
  if (!cfg.auth_env.empty()) {
    const char* v = std::getenv(cfg.auth_env.c_str());
    if (v == nullptr || *v == '\0') {
      fail(ErrorKind::kConfig, "auth variable " + cfg.auth_env + " is not set");
    }
    token = v;
  }
  return std::make_shared<HttpTransport>(std::move(base), std::move(prefix), std::move(token));
}

}  // namespace mixsynth
