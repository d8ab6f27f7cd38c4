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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mixsynth {

using Json = nlohmann::json;

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// First eight bytes of the SHA-256 digest, big-endian.
std::uint64_t hash_seed(std::string_view bytes);

std::string trim(std::string_view s);

/// Reads a line-delimited JSON file. Blank lines are skipped; a malformed
/// line raises a schema error naming its 1-based line number.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

/// Writes records one per line, LF-terminated, keys in sorted order.
/// The file is written to a temporary sibling and renamed into place.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& records);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

// Formats a real the way the record files do: integral values keep one
// decimal ("8.0"), others use the shortest round-trip form.
std::string format_real(double v);

}  // namespace mixsynth
