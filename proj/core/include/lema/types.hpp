// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Canonical domain types shared by every pipeline stage.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lema/decimal.hpp"

namespace lema {

enum class Task { GSM8K, MATH, SVAMP, ASDiv, CSQA, CUSTOM };

std::string_view to_string(Task task) noexcept;
/// Accepts the enum spelling case-insensitively ("gsm8k", "GSM8K").
std::optional<Task> parse_task(std::string_view text) noexcept;
/// Lower-case prefix used in question ids ("gsm8k", "math", ...).
std::string task_id_prefix(Task task);

enum class Origin { original, evolved };

std::string_view to_string(Origin origin) noexcept;
std::optional<Origin> parse_origin(std::string_view text) noexcept;

enum class AnswerKind { numeric, choice, text };

std::string_view to_string(AnswerKind kind) noexcept;

struct Choice {
    char letter = 'A';  // 'A'..'E'
    friend bool operator==(const Choice&, const Choice&) = default;
};

struct TextAnswer {
    std::string value;
    friend bool operator==(const TextAnswer&, const TextAnswer&) = default;
};

/// A final answer. Exactly one payload exists, selected by kind().
class AnswerValue {
  public:
    using Payload = std::variant<Decimal, Choice, TextAnswer>;

    static AnswerValue numeric(Decimal value) { return AnswerValue(std::move(value)); }
    static AnswerValue choice(char letter);
    static AnswerValue text(std::string value) { return AnswerValue(TextAnswer{std::move(value)}); }

    AnswerKind kind() const noexcept { return static_cast<AnswerKind>(payload_.index()); }

    const Decimal& as_numeric() const { return std::get<Decimal>(payload_); }
    char as_choice() const { return std::get<Choice>(payload_).letter; }
    const std::string& as_text() const { return std::get<TextAnswer>(payload_).value; }

    /// Display form: canonical decimal, the choice letter, or the text.
    std::string render() const;

    /// Structural equality (same kind, identical payload). Grading equality
    /// lives in answers_equal().
    friend bool operator==(const AnswerValue&, const AnswerValue&) = default;

  private:
    explicit AnswerValue(Payload payload) : payload_(std::move(payload)) {}

    Payload payload_;
};

struct Question {
    std::string id;
    Task task = Task::GSM8K;
    std::string text;
    AnswerValue gold_answer = AnswerValue::numeric(Decimal{});
    std::optional<int> difficulty;  // MATH levels 1..5 only
    Origin origin = Origin::original;
    std::optional<std::string> parent_id;

    friend bool operator==(const Question&, const Question&) = default;
};

/// Throws ValidationError when a single-record invariant is broken.
void validate(const Question& q);

struct SampleParams {
    double temperature = 0.0;
    std::optional<std::uint64_t> seed;
    std::string prompt_id;

    friend bool operator==(const SampleParams&, const SampleParams&) = default;
};

struct ReasoningPath {
    std::string question_id;
    std::string generator;
    std::string text;
    std::optional<AnswerValue> extracted;
    bool correct = false;
    /// No answer marker could be extracted.
    bool unexpected_format = false;
    SampleParams sample_params;
    /// Every generator that produced this (normalized) text, sorted.
    std::vector<std::string> provenance;

    friend bool operator==(const ReasoningPath&, const ReasoningPath&) = default;
};

void validate(const ReasoningPath& p);

enum class CorrectionSchema { full, no_mistake_step, no_explanation, no_corrected_solution };

std::string_view to_string(CorrectionSchema schema) noexcept;
std::optional<CorrectionSchema> parse_schema(std::string_view text) noexcept;

enum class CorrectionStatus { kept, wrong_answer, parse_failed };

std::string_view to_string(CorrectionStatus status) noexcept;
std::optional<CorrectionStatus> parse_status(std::string_view text) noexcept;

struct Correction {
    std::string question_id;
    /// Generator of the corrected path (first provenance entry).
    std::string generator;
    std::string path_text;
    std::string path_hash;
    std::optional<std::string> incorrect_step;
    std::optional<std::string> explanation;
    std::string corrected_solution;
    std::optional<AnswerValue> extracted;
    CorrectionStatus status = CorrectionStatus::parse_failed;
    CorrectionSchema schema = CorrectionSchema::full;
    std::optional<int> difficulty;
    /// Raw corrector output, kept for audit.
    std::string raw;
    /// Which section was missing when status is parse_failed.
    std::optional<std::string> parse_error;

    friend bool operator==(const Correction&, const Correction&) = default;
};

void validate(const Correction& c);

enum class RecordKind { cot, correction };

std::string_view to_string(RecordKind kind) noexcept;
std::optional<RecordKind> parse_record_kind(std::string_view text) noexcept;

struct SourceIds {
    std::string question_id;
    std::optional<std::string> path_hash;
    /// Set to "corrected_cot" on CoT records extracted from a correction.
    std::optional<std::string> derived_from;

    friend bool operator==(const SourceIds&, const SourceIds&) = default;
};

struct DatasetRecord {
    std::string input;
    std::string output;
    RecordKind kind = RecordKind::cot;
    SourceIds source_ids;
    std::optional<std::int64_t> token_count;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

void validate(const DatasetRecord& r);

}  // namespace lema
