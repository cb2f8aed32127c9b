// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Greedy-decoding accuracy and the perplexity-difference diagnostic.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lema/gateway.hpp"
#include "lema/prompts.hpp"
#include "lema/rational.hpp"
#include "lema/types.hpp"

namespace lema {

enum class Verdict { correct, wrong, unexpected_format, unscored };

std::string_view to_string(Verdict v) noexcept;

struct QuestionVerdict {
    std::string question_id;
    Verdict verdict = Verdict::unscored;
    std::optional<AnswerValue> extracted;
    std::string output;
    /// Transport error text for unscored questions.
    std::string error;
};

struct EvalReport {
    std::string endpoint;
    std::string checkpoint;
    std::vector<QuestionVerdict> verdicts;
    std::int64_t correct = 0;
    std::int64_t wrong = 0;
    std::int64_t unexpected_format = 0;
    std::int64_t unscored = 0;
    /// correct / scored, where unexpected_format counts as scored and wrong.
    Rational accuracy;

    std::int64_t scored() const noexcept { return correct + wrong + unexpected_format; }
};

struct EvalConfig {
    int max_tokens = 2048;
    std::string prompt_id = std::string(kDefaultInstructionPrompt);
    /// Fail the run on any unscored question instead of excluding it.
    bool strict = false;
    std::string checkpoint;
};

/// Splits off questions whose gold answer is not numeric; returns the kept
/// questions and the number dropped.
std::pair<std::vector<Question>, std::size_t> filter_numeric_gradable(std::span<const Question> questions);

/// Grades one completion.
QuestionVerdict grade_output(const Question& q, std::string output);

/// Throws ValidationError on an empty test set or an ungradable ASDiv item,
/// and Error when nothing could be scored (or anything, under strict).
EvalReport evaluate(Gateway& gateway, const PromptRegistry& prompts, const EndpointSpec& endpoint,
                    std::span<const Question> test_set, const EvalConfig& cfg);

/// Builds the totals and accuracy from verdicts.
EvalReport summarize(std::string endpoint, std::string checkpoint, std::vector<QuestionVerdict> verdicts);

/// One JSON line per verdict followed by a summary line.
std::string encode(const EvalReport& report);
/// Reads back the summary line of a report file (verdicts are not loaded).
EvalReport load_report_summary(const std::filesystem::path& path);

struct CheckpointScore {
    std::string checkpoint;
    Rational accuracy;
};

struct BestCheckpoints {
    std::vector<CheckpointScore> top;
    Rational average;
    /// Set when fewer than k reports were given.
    std::string note;
};

/// Highest accuracies first, ties by checkpoint id ascending; average of the
/// returned entries.
BestCheckpoints best_checkpoints(std::vector<CheckpointScore> scores, std::size_t k = 3);

/// "checkpoint,step,accuracy" CSV over every report in `dir`. The step is the
/// last run of digits in the checkpoint id.
std::string training_curve_csv(const std::filesystem::path& dir);

/// exp(-mean(logprobs)). Throws ValidationError on an empty list.
double ppl(std::span<const double> logprobs);

double ppl(Gateway& gateway, const EndpointSpec& endpoint, std::string_view context, std::string_view continuation);

struct PplTriple {
    std::string question_id;
    std::string question;
    std::string mistaken;
    std::string correct;
};

/// Triples from kept corrections: (question, original path, corrected solution).
std::vector<PplTriple> triples_from_corrections(std::span<const Correction> corrections,
                                                std::span<const Question> questions);

std::string encode(const PplTriple& t);
PplTriple decode_triple(std::string_view line);

struct PplTerm {
    std::string question_id;
    double ppl_mistaken = 0;
    double ppl_correct = 0;

    double diff() const noexcept { return ppl_mistaken - ppl_correct; }
};

struct DeltaPpl {
    double value = 0;
    std::vector<PplTerm> terms;
    std::vector<std::string> unscored;
};

/// Mean of per-term differences. Throws ValidationError when empty.
double delta_ppl(std::span<const PplTerm> terms);

/// Scores both CoTs of every triple with the question as context. Triples that
/// fail to score are listed in `unscored`; capability errors propagate.
DeltaPpl delta_ppl(Gateway& gateway, const EndpointSpec& endpoint, std::span<const PplTriple> triples);

std::string encode(const DeltaPpl& d);

}  // namespace lema
