// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Mistake collection: sample reasoning paths from each reasoner and keep the
// ones whose final answer disagrees with gold.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/gateway.hpp"
#include "lema/prompts.hpp"
#include "lema/types.hpp"

namespace lema {

struct CollectConfig {
    int samples_per_question = 4;
    double temperature = 0.8;
    std::string prompt_id = std::string(kDefaultReasoningPrompt);
    int max_tokens = 512;
    std::optional<std::uint64_t> seed;
};

struct FailureEntry {
    std::string question_id;
    std::string generator;
    /// "transport", "unexpected_format", or "all_transport_failed".
    std::string kind;
    std::string detail;
};

struct CollectResult {
    /// Wrong-answer paths with an extractable answer: the correction pool.
    std::vector<ReasoningPath> incorrect;
    /// Correct paths, usable as CoT augmentation.
    std::vector<ReasoningPath> correct;
    /// Paths without an extractable answer; excluded from the pool.
    std::vector<ReasoningPath> unexpected_format;
    std::vector<FailureEntry> failures;
};

/// Grades one sampled text against its question.
ReasoningPath grade_path(const Question& q, std::string generator, std::string text, SampleParams params);

CollectResult collect(Gateway& gateway, const PromptRegistry& prompts, std::span<const Question> questions,
                      std::span<const EndpointSpec> reasoners, const CollectConfig& cfg);

/// Set union on (question_id, whitespace-normalized text). Duplicates keep
/// every generator in `provenance`; output is sorted by question_id, then
/// generator, then text hash. With a corpus, unknown question ids throw
/// IntegrityError.
std::vector<ReasoningPath> merge_pools(std::span<const std::vector<ReasoningPath>> pools,
                                       const Corpus* corpus = nullptr);

/// One JSON line per failure entry.
std::string encode(const FailureEntry& entry);

}  // namespace lema
