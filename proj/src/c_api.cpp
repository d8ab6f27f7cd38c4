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


#include "mixsynth/mixsynth.h"

#include <cstring>
#include <string>

#include "mixsynth/corpus.hpp"
#include "mixsynth/error.hpp"
#include "mixsynth/pairing.hpp"
#include "mixsynth/pipeline.hpp"
#include "mixsynth/solver.hpp"
#include "mixsynth/synthesis.hpp"

struct mixsynth_pipeline {
  std::unique_ptr<mixsynth::Pipeline> impl;
  std::string last_report;
};

struct mixsynth_corpus {
  mixsynth::Corpus impl;
};

namespace {

thread_local std::string g_last_error;

int status_of(mixsynth::ErrorKind kind) {
  using mixsynth::ErrorKind;
  switch (kind) {
    case ErrorKind::kIo: return MIXSYNTH_ERR_IO;
    case ErrorKind::kSchema: return MIXSYNTH_ERR_SCHEMA;
    case ErrorKind::kDuplicate: return MIXSYNTH_ERR_DUPLICATE;
    case ErrorKind::kPrecondition: return MIXSYNTH_ERR_PRECONDITION;
    case ErrorKind::kProvider: return MIXSYNTH_ERR_PROVIDER;
    case ErrorKind::kParse: return MIXSYNTH_ERR_PARSE;
    case ErrorKind::kConfig: return MIXSYNTH_ERR_CONFIG;
    case ErrorKind::kMissingArtifact: return MIXSYNTH_ERR_MISSING_ARTIFACT;
  }
  return MIXSYNTH_ERR_INTERNAL;
}

int invalid(const char* what) {
  g_last_error = what;
  return MIXSYNTH_ERR_INVALID_ARGUMENT;
}

template <typename F>
int guard(F&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const mixsynth::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MIXSYNTH_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return MIXSYNTH_ERR_INTERNAL;
  }
}

int write_out(const std::string& value, char* buf, size_t* len) {
  const size_t needed = value.size() + 1;
  const size_t capacity = *len;
  *len = needed;
  if (buf == nullptr || capacity < needed) {
    g_last_error = "buffer too small: " + std::to_string(needed) + " bytes needed";
    return MIXSYNTH_ERR_INSUFFICIENT_BUFFER;
  }
  std::memcpy(buf, value.c_str(), needed);
  return MIXSYNTH_OK;
}

}  // namespace

extern "C" {

void mixsynth_options_init(mixsynth_options* opts) {
  if (opts != nullptr) *opts = mixsynth_options{0, 0, 0, 0, nullptr};
}

const char* mixsynth_version(void) { return "0.1.0"; }

const char* mixsynth_last_error(void) { return g_last_error.c_str(); }

const char* mixsynth_status_name(int status) {
  switch (status) {
    case MIXSYNTH_OK: return "ok";
    case MIXSYNTH_PARTIAL: return "partial";
    case MIXSYNTH_NOT_FOUND: return "not found";
    case MIXSYNTH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MIXSYNTH_ERR_INSUFFICIENT_BUFFER: return "insufficient buffer";
    case MIXSYNTH_ERR_IO: return "i/o error";
    case MIXSYNTH_ERR_SCHEMA: return "schema error";
    case MIXSYNTH_ERR_DUPLICATE: return "duplicate record";
    case MIXSYNTH_ERR_PRECONDITION: return "precondition violated";
    case MIXSYNTH_ERR_PROVIDER: return "provider error";
    case MIXSYNTH_ERR_PARSE: return "parse error";
    case MIXSYNTH_ERR_CONFIG: return "configuration error";
    case MIXSYNTH_ERR_MISSING_ARTIFACT: return "missing artifact";
    default: return "internal error";
  }
}

const char* mixsynth_command_name(size_t index) {
  const auto& names = mixsynth::Pipeline::commands();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int mixsynth_pipeline_open(mixsynth_pipeline** out, const char* config_path, const char* out_dir,
                           const mixsynth_options* opts) {
  if (out == nullptr || config_path == nullptr || out_dir == nullptr) {
    return invalid("pipeline_open: null argument");
  }
  *out = nullptr;
  return guard([&] {
    mixsynth::PipelineOptions po;
    if (opts != nullptr) {
      if (opts->has_seed) po.seed = opts->seed;
      po.force_mock = opts->force_mock != 0;
      po.resume = opts->resume != 0;
      if (opts->review_file != nullptr) po.review_file = opts->review_file;
    }
    auto handle = std::make_unique<mixsynth_pipeline>();
    handle->impl = std::make_unique<mixsynth::Pipeline>(mixsynth::load_run_config(config_path),
                                                        out_dir, std::move(po));
    *out = handle.release();
    return MIXSYNTH_OK;
  });
}

void mixsynth_pipeline_close(mixsynth_pipeline* pipeline) { delete pipeline; }

int mixsynth_pipeline_run(mixsynth_pipeline* pipeline, const char* command) {
  if (pipeline == nullptr || command == nullptr) return invalid("pipeline_run: null argument");
  return guard([&] {
    const auto report = pipeline->impl->run(command);
    pipeline->last_report = report.to_json().dump(2);
    return report.status == mixsynth::RunStatus::kOk ? MIXSYNTH_OK : MIXSYNTH_PARTIAL;
  });
}

const char* mixsynth_pipeline_last_report(const mixsynth_pipeline* pipeline) {
  return pipeline == nullptr ? "" : pipeline->last_report.c_str();
}

int mixsynth_corpus_load(mixsynth_corpus** out, const char* path, const char* source_tag) {
  if (out == nullptr || path == nullptr) return invalid("corpus_load: null argument");
  *out = nullptr;
  return guard([&] {
    auto handle = std::make_unique<mixsynth_corpus>();
    handle->impl = mixsynth::load_corpus(path, source_tag == nullptr ? "" : source_tag);
    *out = handle.release();
    return MIXSYNTH_OK;
  });
}

void mixsynth_corpus_free(mixsynth_corpus* corpus) { delete corpus; }

int mixsynth_corpus_size(const mixsynth_corpus* corpus, size_t* out) {
  if (corpus == nullptr || out == nullptr) return invalid("corpus_size: null argument");
  *out = corpus->impl.problems.size();
  return MIXSYNTH_OK;
}

int mixsynth_corpus_stats_json(const mixsynth_corpus* corpus, char* buf, size_t* len) {
  if (corpus == nullptr || len == nullptr) return invalid("corpus_stats_json: null argument");
  return guard([&] {
    return write_out(mixsynth::stats_to_json(mixsynth::corpus_stats(corpus->impl)).dump(), buf, len);
  });
}

int mixsynth_cosine(const double* a, const double* b, size_t dimension, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return invalid("cosine: null argument");
  return guard([&] {
    const mixsynth::EmbeddingVector va(std::vector<double>(a, a + dimension));
    const mixsynth::EmbeddingVector vb(std::vector<double>(b, b + dimension));
    *out = mixsynth::cosine_similarity(va, vb);
    return MIXSYNTH_OK;
  });
}

int mixsynth_extract_boxed(const char* text, char* buf, size_t* len) {
  if (text == nullptr || len == nullptr) return invalid("extract_boxed: null argument");
  return guard([&] {
    const auto boxed = mixsynth::extract_boxed(text);
    if (!boxed) {
      *len = 0;
      return static_cast<int>(MIXSYNTH_NOT_FOUND);
    }
    return write_out(*boxed, buf, len);
  });
}

int mixsynth_ngram_degeneracy(const char* text, size_t n, double* duplicate_ratio, size_t* max_consecutive) {
  if (text == nullptr || duplicate_ratio == nullptr || max_consecutive == nullptr) {
    return invalid("ngram_degeneracy: null argument");
  }
  return guard([&] {
    const auto s = mixsynth::ngram_degeneracy(text, n);
    *duplicate_ratio = s.duplicate_ratio;
    *max_consecutive = s.max_consecutive;
    return MIXSYNTH_OK;
  });
}

int mixsynth_nominal_difficulty(const char* category, double low, double high, double* out) {
  if (category == nullptr || out == nullptr) return invalid("nominal_difficulty: null argument");
  return guard([&] {
    *out = mixsynth::nominal_difficulty(mixsynth::category_from_name(category), low, high);
    return MIXSYNTH_OK;
  });
}

}  // extern "C"
