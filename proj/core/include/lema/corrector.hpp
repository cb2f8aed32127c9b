// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Correction generation: ask a corrector model to locate and fix the mistake
// in each wrong path, then keep only corrections that reach the gold answer.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/gateway.hpp"
#include "lema/prompts.hpp"
#include "lema/rational.hpp"
#include "lema/types.hpp"

namespace lema {

inline constexpr std::string_view kIncorrectStepHeader = "Incorrect Step:";
inline constexpr std::string_view kExplanationHeader = "Explanation:";
inline constexpr std::string_view kCorrectSolutionHeader = "Correct Solution:";

struct ParsedCorrection {
    std::optional<std::string> incorrect_step;
    std::optional<std::string> explanation;
    std::optional<std::string> corrected_solution;
    /// Header of the first missing required section; empty on success.
    std::string missing;

    bool ok() const noexcept { return missing.empty(); }
};

/// Splits corrector output on the three section headers (case-insensitive,
/// at the start of a line, any order). A section runs to the next header or
/// the end of the text. Sections the schema omits are dropped.
ParsedCorrection parse_correction(std::string_view text, CorrectionSchema schema);

/// Prompt-example layout of a correction; parse_correction inverts it.
std::string render_correction(const Correction& c);

/// CSQA corrections never require the mistake step.
CorrectionSchema effective_schema(Task task, CorrectionSchema requested) noexcept;

/// Parses and grades one corrector output for `path`.
Correction grade_correction(const Question& q, const ReasoningPath& path, std::string raw, CorrectionSchema schema);

struct CorrectConfig {
    CorrectionSchema schema = CorrectionSchema::full;
    /// Empty selects the default prompt for the schema.
    std::string prompt_id;
    /// Samples per path. 1 is greedy; more draws at resample_temperature and
    /// the first kept one wins.
    int attempts = 1;
    double resample_temperature = 0.7;
    int max_tokens = 1024;
};

/// One correction per pooled path, in pool order, whatever its status.
/// Throws TransportError if any request fails after retries.
std::vector<Correction> generate(Gateway& gateway, const PromptRegistry& prompts, const Corpus& corpus,
                                 std::span<const ReasoningPath> pool, const EndpointSpec& corrector,
                                 const CorrectConfig& cfg);

enum class SuccessGroup { generator, difficulty };

struct SuccessRow {
    std::string group;
    std::int64_t attempts = 0;
    std::int64_t kept = 0;
    Rational rate;
};

/// Kept/attempts per group. Groups with no attempts do not appear; corrections
/// without a difficulty fall in group "unknown", listed last.
std::vector<SuccessRow> success_rate(std::span<const Correction> corrections, SuccessGroup group_by);

/// "8.0%" style rendering of kept/attempts.
std::string render_rate(const Rational& rate);

}  // namespace lema
