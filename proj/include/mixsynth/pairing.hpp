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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixsynth/corpus.hpp"

namespace mixsynth {

/// Dense embedding with its Euclidean norm cached at construction.
/// Empty, zero and non-finite vectors are rejected.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double norm() const { return norm_; }
  bool empty() const { return values_.empty(); }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
};

/// Cosine of the angle between two embeddings, clamped to [-1, 1].
/// Bit-for-bit symmetric in its arguments.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// An unordered pair stored in canonical (lower, higher difficulty) order.
struct QuestionPair {
  std::string low_id;
  std::string high_id;
  double low_difficulty = 0.0;
  double high_difficulty = 0.0;
  double similarity = 0.0;

  bool contains(const std::string& id) const { return low_id == id || high_id == id; }
  const std::string& partner_of(const std::string& id) const {
    return low_id == id ? high_id : low_id;
  }
  bool operator==(const QuestionPair&) const = default;
};

struct PairingConfig {
  double tau = 0.8;
  // Per-question partner cap; 0 disables the cap.
  std::size_t max_pairs_per_question = 5;
  std::uint64_t seed = 0;
};

using EmbeddingMap = std::map<std::string, EmbeddingVector>;

/// Builds every canonical pair with similarity above tau and unequal
/// difficulties, then applies the per-question cap. A pair survives the cap
/// when it ranks in the top-k of either endpoint (similarity descending,
/// partner id ascending). Output is sorted by (low_id, high_id).
std::vector<QuestionPair> build_pairs(const Corpus& c, const EmbeddingMap& embeddings,
                                      const PairingConfig& cfg);

/// The highest-similarity pair containing `question_id`, ties going to the
/// lexically smaller partner id.
std::optional<QuestionPair> select_generation_pair(
    const std::string& question_id, const std::vector<QuestionPair>& pairs);

/// Warning text when tau sits outside the recommended [0.75, 0.9] band.
std::optional<std::string> tau_band_warning(double tau);
void validate_pairing_config(const PairingConfig& cfg);

Json pair_to_json(const QuestionPair& p);
QuestionPair pair_from_json(const Json& j, const Corpus& c);
void save_pairs(const std::vector<QuestionPair>& pairs, const std::filesystem::path& path);
std::vector<QuestionPair> load_pairs(const std::filesystem::path& path, const Corpus& c);

}  // namespace mixsynth
