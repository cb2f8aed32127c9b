// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Fine-tuning dataset assembly. Records are input/output pairs; only the
// output side is trained on.
//
// CoT input:         "Question: {q}\nAnswer: Let's think step by step.\n"
// Correction input:  "Question: {q}\nOriginal solution:\n{path}\n{instruction}\n"
// Correction output: the correction sections in prompt-example layout.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/tokenizer.hpp"
#include "lema/types.hpp"

namespace lema {

inline constexpr std::string_view kCorrectionInstruction =
    "Identify the incorrect step in the original solution, explain the mistake, and write a correct solution.";

std::string cot_input(std::string_view question);
/// Inverse of cot_input; nullopt if `input` does not follow the template.
std::optional<std::string> split_cot_input(std::string_view input);

std::string correction_input(std::string_view question, std::string_view path);

/// Throws ValidationError unless `path` grades correct for `q`. The output
/// always ends with a "The answer is X." line.
DatasetRecord render_cot_record(const Question& q, std::string_view path);

/// Throws ValidationError for a correction that is not kept.
DatasetRecord render_correction_record(const Question& q, const Correction& c);

/// CoT record made of the corrected solution alone.
DatasetRecord extract_corrected_cot(const Question& q, const Correction& c);

enum class Variant { cot_only, lema, lema_size_matched, cot_from_corrections, cot_token_matched };

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view text) noexcept;

struct AssemblyPlan {
    Variant variant = Variant::lema;
    std::optional<std::size_t> target_size;
    std::optional<std::int64_t> target_tokens;
    std::uint64_t rng_seed = 0;
    std::string tokenizer_id = std::string(kDefaultTokenizer);
};

/// Throws ValidationError when a matched variant lacks its target.
void validate(const AssemblyPlan& plan);

struct Manifest {
    std::string variant;
    std::uint64_t seed = 0;
    std::string tokenizer;
    std::size_t records = 0;
    std::size_t cot_records = 0;
    std::size_t correction_records = 0;
    std::int64_t tokens = 0;
    std::int64_t cot_tokens = 0;
    std::int64_t correction_tokens = 0;
    std::optional<std::size_t> target_size;
    std::optional<std::int64_t> target_tokens;
    /// Extra-pool CoT records added (token-matched growth).
    std::size_t added_records = 0;
    /// Base CoT records dropped (token-matched shrink).
    std::size_t removed_records = 0;
};

/// Pretty-printed JSON with a trailing newline; no timestamps.
std::string encode(const Manifest& m);

struct Assembly {
    std::vector<DatasetRecord> records;
    Manifest manifest;
};

/// Builds one dataset variant. `cot_pool` holds correct paths; only kept
/// corrections are used. `extra_cot` feeds token-matched growth. Records are
/// shuffled with plan.rng_seed. Throws ValidationError stating the shortfall
/// when a pool is too small for the target.
Assembly assemble(const AssemblyPlan& plan, const Corpus& corpus, std::span<const ReasoningPath> cot_pool,
                  std::span<const Correction> corrections, std::span<const ReasoningPath> extra_cot = {});

}  // namespace lema
