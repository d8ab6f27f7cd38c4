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

#include <string_view>

namespace mixsynth::prompts {

extern const std::string_view kHybridInstructions;
extern const std::string_view kDecomposedInstructions;
extern const std::string_view kVerificationRubric;
// Appended to the rubric so verdicts are machine-parseable.
extern const std::string_view kVerificationOutputFormat;
extern const std::string_view kSolutionInstructions;
extern const std::string_view kSolutionReferenceNote;
extern const std::string_view kScoringInstructions;

inline constexpr std::string_view kNewProblemHeader = "#New Problem#:";

}  // namespace mixsynth::prompts
