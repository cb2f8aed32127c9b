// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/corrector.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "lema/answer.hpp"
#include "lema/error.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

enum Section { kStep = 0, kExplanation = 1, kSolution = 2 };

constexpr std::array<std::string_view, 3> kHeaders{kIncorrectStepHeader, kExplanationHeader, kCorrectSolutionHeader};

std::array<bool, 3> required_sections(CorrectionSchema schema) {
    switch (schema) {
        case CorrectionSchema::full: return {true, true, true};
        case CorrectionSchema::no_mistake_step: return {false, true, true};
        case CorrectionSchema::no_explanation: return {true, false, true};
        case CorrectionSchema::no_corrected_solution: return {true, true, false};
    }
    return {true, true, true};
}

struct HeaderHit {
    std::size_t line_start;
    std::size_t content_start;
    int section;
};

std::vector<HeaderHit> find_headers(std::string_view text) {
    std::vector<HeaderHit> hits;
    std::size_t line = 0;
    while (line <= text.size()) {
        std::size_t end = text.find('\n', line);
        if (end == std::string_view::npos) end = text.size();
        std::size_t p = line;
        while (p < end && (text[p] == ' ' || text[p] == '\t')) ++p;
        const std::string_view rest = text.substr(p, end - p);
        for (int s = 0; s < 3; ++s) {
            if (istarts_with(rest, kHeaders[s])) {
                hits.push_back({line, p + kHeaders[s].size(), s});
                break;
            }
        }
        if (end == text.size()) break;
        line = end + 1;
    }
    return hits;
}

}  // namespace

ParsedCorrection parse_correction(std::string_view text, CorrectionSchema schema) {
    std::array<std::optional<std::string>, 3> found;
    const auto hits = find_headers(text);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const std::size_t stop = i + 1 < hits.size() ? hits[i + 1].line_start : text.size();
        auto& slot = found[hits[i].section];
        if (slot) continue;  // a repeated header does not overwrite the first section
        const std::string_view body = trim(text.substr(hits[i].content_start, stop - hits[i].content_start));
        if (!body.empty()) slot = std::string(body);
    }

    const auto required = required_sections(schema);
    ParsedCorrection out;
    for (int s = 0; s < 3; ++s) {
        if (!required[s]) {
            found[s].reset();
        } else if (!found[s] && out.missing.empty()) {
            out.missing = std::string(kHeaders[s]);
        }
    }
    out.incorrect_step = std::move(found[kStep]);
    out.explanation = std::move(found[kExplanation]);
    out.corrected_solution = std::move(found[kSolution]);
    return out;
}

std::string render_correction(const Correction& c) {
    std::string out;
    if (c.incorrect_step) out += std::string(kIncorrectStepHeader) + " " + *c.incorrect_step + "\n";
    if (c.explanation) out += std::string(kExplanationHeader) + " " + *c.explanation + "\n";
    if (c.schema != CorrectionSchema::no_corrected_solution && !c.corrected_solution.empty()) {
        out += std::string(kCorrectSolutionHeader) + "\n" + c.corrected_solution + "\n";
    }
    return out;
}

CorrectionSchema effective_schema(Task task, CorrectionSchema requested) noexcept {
    if (task == Task::CSQA && requested == CorrectionSchema::full) return CorrectionSchema::no_mistake_step;
    return requested;
}

Correction grade_correction(const Question& q, const ReasoningPath& path, std::string raw, CorrectionSchema schema) {
    Correction c;
    c.question_id = q.id;
    c.generator = path.generator;
    c.path_text = path.text;
    c.path_hash = path_hash(path.text);
    c.schema = schema;
    c.difficulty = q.difficulty;

    ParsedCorrection parsed = parse_correction(raw, schema);
    c.incorrect_step = std::move(parsed.incorrect_step);
    c.explanation = std::move(parsed.explanation);
    c.corrected_solution = parsed.corrected_solution.value_or("");
    if (!parsed.ok()) {
        c.status = CorrectionStatus::parse_failed;
        c.parse_error = "missing section " + parsed.missing;
    } else {
        // The answer comes from the corrected solution; the ablation without one
        // falls back to the whole output.
        c.extracted = extract_answer(parsed.corrected_solution ? std::string_view(c.corrected_solution)
                                                               : std::string_view(raw),
                                     q.task);
        if (!c.extracted) {
            c.status = CorrectionStatus::parse_failed;
            c.parse_error = "no final answer";
        } else {
            c.status = answers_equal(*c.extracted, q.gold_answer) ? CorrectionStatus::kept
                                                                   : CorrectionStatus::wrong_answer;
        }
    }
    c.raw = std::move(raw);
    return c;
}

std::vector<Correction> generate(Gateway& gateway, const PromptRegistry& prompts, const Corpus& corpus,
                                 std::span<const ReasoningPath> pool, const EndpointSpec& corrector,
                                 const CorrectConfig& cfg) {
    if (cfg.attempts < 1) throw ValidationError("attempts must be >= 1");
    if (!cfg.prompt_id.empty()) prompts.correction(cfg.prompt_id, cfg.schema);

    std::vector<SampleRequest> requests;
    std::vector<CorrectionSchema> schemas;
    requests.reserve(pool.size());
    schemas.reserve(pool.size());
    for (const auto& path : pool) {
        const Question& q = corpus.at(path.question_id);
        const CorrectionSchema schema = effective_schema(q.task, cfg.schema);
        const std::string id =
            cfg.prompt_id.empty() || schema != cfg.schema ? default_correction_prompt(schema) : cfg.prompt_id;
        SampleRequest req;
        req.prompt = prompts.correction(id, schema).render(q.text, path.text);
        req.n = cfg.attempts;
        req.temperature = cfg.attempts == 1 ? 0.0 : cfg.resample_temperature;
        req.max_tokens = cfg.max_tokens;
        requests.push_back(std::move(req));
        schemas.push_back(schema);
    }

    const auto outcomes = gateway.sample_all(corrector, requests);
    std::vector<Correction> out;
    out.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto& outcome = outcomes[i];
        if (!outcome.ok()) {
            if (outcome.auth_failure) throw AuthError(outcome.error, outcome.status, 1);
            throw TransportError("correction request for " + pool[i].question_id + " failed: " + outcome.error,
                                 outcome.status, 0);
        }
        const Question& q = corpus.at(pool[i].question_id);
        std::optional<Correction> best;
        for (const auto& text : outcome.value->texts) {
            Correction c = grade_correction(q, pool[i], text, schemas[i]);
            if (!best || static_cast<int>(c.status) < static_cast<int>(best->status)) best = std::move(c);
            if (best->status == CorrectionStatus::kept) break;
        }
        if (!best) best = grade_correction(q, pool[i], "", schemas[i]);
        out.push_back(std::move(*best));
    }
    return out;
}

std::vector<SuccessRow> success_rate(std::span<const Correction> corrections, SuccessGroup group_by) {
    // Difficulty groups sort numerically with "unknown" last.
    std::map<std::pair<int, std::string>, std::pair<std::int64_t, std::int64_t>> counts;
    for (const auto& c : corrections) {
        std::pair<int, std::string> key;
        if (group_by == SuccessGroup::generator) {
            key = {0, c.generator};
        } else if (c.difficulty) {
            key = {*c.difficulty, "Level " + std::to_string(*c.difficulty)};
        } else {
            key = {1 << 20, "unknown"};
        }
        auto& [attempts, kept] = counts[key];
        ++attempts;
        if (c.status == CorrectionStatus::kept) ++kept;
    }
    std::vector<SuccessRow> rows;
    for (const auto& [key, value] : counts) {
        if (value.first == 0) continue;
        rows.push_back({key.second, value.first, value.second, Rational(value.second, value.first)});
    }
    return rows;
}

std::string render_rate(const Rational& rate) { return render_percent(rate, 1) + "%"; }

}  // namespace lema
