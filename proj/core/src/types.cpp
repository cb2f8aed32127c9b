// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/types.hpp"

#include <array>
#include <utility>

#include "lema/error.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

constexpr std::array<std::pair<Task, std::string_view>, 6> kTasks{{
    {Task::GSM8K, "GSM8K"},
    {Task::MATH, "MATH"},
    {Task::SVAMP, "SVAMP"},
    {Task::ASDiv, "ASDiv"},
    {Task::CSQA, "CSQA"},
    {Task::CUSTOM, "CUSTOM"},
}};

constexpr std::array<std::string_view, 4> kSchemas{"full", "no_mistake_step", "no_explanation",
                                                   "no_corrected_solution"};
constexpr std::array<std::string_view, 3> kStatuses{"kept", "wrong_answer", "parse_failed"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Task task) noexcept {
    for (const auto& [t, name] : kTasks) {
        if (t == task) return name;
    }
    return "CUSTOM";
}

std::optional<Task> parse_task(std::string_view text) noexcept {
    for (const auto& [t, name] : kTasks) {
        if (iequals(name, text)) return t;
    }
    return std::nullopt;
}

std::string task_id_prefix(Task task) { return to_lower(to_string(task)); }

std::string_view to_string(Origin origin) noexcept { return origin == Origin::original ? "original" : "evolved"; }

std::optional<Origin> parse_origin(std::string_view text) noexcept {
    if (text == "original") return Origin::original;
    if (text == "evolved") return Origin::evolved;
    return std::nullopt;
}

std::string_view to_string(AnswerKind kind) noexcept {
    switch (kind) {
        case AnswerKind::numeric: return "numeric";
        case AnswerKind::choice: return "choice";
        case AnswerKind::text: return "text";
    }
    return "text";
}

AnswerValue AnswerValue::choice(char letter) {
    if (letter < 'A' || letter > 'E') throw ValidationError(std::string("choice letter out of range: ") + letter);
    return AnswerValue(Choice{letter});
}

std::string AnswerValue::render() const {
    switch (kind()) {
        case AnswerKind::numeric: return as_numeric().str();
        case AnswerKind::choice: return std::string(1, as_choice());
        case AnswerKind::text: return as_text();
    }
    return {};
}

std::string_view to_string(CorrectionSchema schema) noexcept { return kSchemas[static_cast<std::size_t>(schema)]; }

std::optional<CorrectionSchema> parse_schema(std::string_view text) noexcept {
    return lookup<CorrectionSchema>(kSchemas, text);
}

std::string_view to_string(CorrectionStatus status) noexcept { return kStatuses[static_cast<std::size_t>(status)]; }

std::optional<CorrectionStatus> parse_status(std::string_view text) noexcept {
    return lookup<CorrectionStatus>(kStatuses, text);
}

std::string_view to_string(RecordKind kind) noexcept { return kind == RecordKind::cot ? "cot" : "correction"; }

std::optional<RecordKind> parse_record_kind(std::string_view text) noexcept {
    if (text == "cot") return RecordKind::cot;
    if (text == "correction") return RecordKind::correction;
    return std::nullopt;
}

void validate(const Question& q) {
    if (q.id.empty()) throw ValidationError("question with empty id");
    if (trim(q.text).empty()) throw ValidationError("question " + q.id + " has empty text");
    if (q.origin == Origin::evolved && !q.parent_id) {
        throw ValidationError("evolved question " + q.id + " has no parent_id");
    }
    if (q.origin == Origin::original && q.parent_id) {
        throw ValidationError("original question " + q.id + " carries a parent_id");
    }
    // Evolved questions never inherit a difficulty label.
    if (q.task == Task::MATH && q.origin == Origin::original && !q.difficulty) {
        throw ValidationError("MATH question " + q.id + " has no difficulty");
    }
    if (q.task != Task::MATH && q.difficulty) {
        throw ValidationError("question " + q.id + " has a difficulty but task is not MATH");
    }
    if (q.difficulty && (*q.difficulty < 1 || *q.difficulty > 5)) {
        throw ValidationError("question " + q.id + " difficulty out of range 1..5");
    }
    if (q.task == Task::CSQA && q.gold_answer.kind() != AnswerKind::choice) {
        throw ValidationError("CSQA question " + q.id + " needs a choice gold answer");
    }
}

void validate(const ReasoningPath& p) {
    if (p.question_id.empty()) throw ValidationError("reasoning path without question_id");
    if (trim(p.text).empty()) throw ValidationError("reasoning path for " + p.question_id + " has empty text");
    if (p.correct && !p.extracted) {
        throw ValidationError("reasoning path for " + p.question_id + " is marked correct without an answer");
    }
    if (p.unexpected_format && p.extracted) {
        throw ValidationError("reasoning path for " + p.question_id + " is unexpected_format but has an answer");
    }
}

void validate(const Correction& c) {
    if (c.question_id.empty()) throw ValidationError("correction without question_id");
    if (c.status != CorrectionStatus::kept) return;
    if (!c.extracted) throw ValidationError("kept correction for " + c.question_id + " has no extracted answer");
    if (c.schema != CorrectionSchema::no_corrected_solution && trim(c.corrected_solution).empty()) {
        throw ValidationError("kept correction for " + c.question_id + " has an empty corrected solution");
    }
    if (c.schema == CorrectionSchema::full && (!c.incorrect_step || !c.explanation)) {
        throw ValidationError("kept full-schema correction for " + c.question_id + " is missing a section");
    }
}

void validate(const DatasetRecord& r) {
    if (r.input.empty() || r.output.empty()) throw ValidationError("dataset record with empty input or output");
    if (r.source_ids.question_id.empty()) throw ValidationError("dataset record without source question id");
    if (r.kind == RecordKind::correction && !r.source_ids.path_hash) {
        throw ValidationError("correction record without path hash");
    }
}

}  // namespace lema
