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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixsynth/providers.hpp"

namespace mixsynth {

/// Offline stand-ins for the live backends. Every response is a pure
/// function of (request body, mock seed), so runs on mocks reproduce
/// bit-for-bit.

/// Reply text the mock model for `role` gives to `prompt`. `sampling_seed`
/// is the request's "seed" field, if any.
std::string mock_chat_text(Role role, const std::string& prompt,
                           std::optional<std::uint64_t> sampling_seed, std::uint64_t seed);

/// Seeded feature-hashing embedding: every lowercase word (minus a short
/// stop list) contributes a unit-scale random direction drawn from
/// mt19937_64 seeded by hash(word, seed); the sum is L2-normalised.
std::vector<double> mock_embedding(const std::string& text, std::size_t dimension, std::uint64_t seed);

/// Serves POST /chat/completions with mock_chat_text.
std::shared_ptr<Transport> make_mock_chat_transport(Role role, std::uint64_t seed);

/// Serves POST /embeddings with mock_embedding.
std::shared_ptr<Transport> make_mock_embedding_transport(std::size_t dimension, std::uint64_t seed);

/// Replies with fixed text for requests whose body SHA-256 is a key of
/// `fixtures`, and 404 otherwise.
std::shared_ptr<Transport> make_fixture_transport(std::map<std::string, std::string> fixtures);

/// Wraps reply text in a chat-completions response body.
std::string chat_completion_body(const std::string& text);

}  // namespace mixsynth
