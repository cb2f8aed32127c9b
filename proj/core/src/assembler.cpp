// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/assembler.hpp"

#include <algorithm>
#include <numeric>

#include "json_codec.hpp"
#include "lema/answer.hpp"
#include "lema/corrector.hpp"
#include "lema/error.hpp"
#include "lema/rng.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

constexpr std::string_view kQuestionPrefix = "Question: ";
constexpr std::string_view kCotSuffix = "\nAnswer: Let's think step by step.\n";

// Sub-seeds so CoT subsampling, extra-pool order and the final shuffle are
// independent draws.
constexpr std::uint64_t kSubsetStream = 1;
constexpr std::uint64_t kExtraStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

Rng stream(std::uint64_t seed, std::uint64_t which) { return Rng(Rng::mix(seed) ^ Rng::mix(which)); }

std::string with_answer_line(std::string_view text, const AnswerValue& answer) {
    std::string out(trim(text));
    const std::string line = "The answer is " + answer.render() + ".";
    const std::size_t marker = irfind(out, "the answer is");
    const std::size_t hash = out.rfind("####");
    if (marker != std::string::npos && (hash == std::string::npos || marker > hash)) return out;
    if (hash != std::string::npos) {
        const std::size_t begin = out.rfind('\n', hash);
        const std::size_t line_start = begin == std::string::npos ? 0 : begin + 1;
        const std::size_t end = out.find('\n', hash);
        std::string rest = end == std::string::npos ? "" : out.substr(end);
        return std::string(trim(out.substr(0, line_start) + line + rest));
    }
    return out + "\n" + line;
}

void require_correct(const Question& q, std::string_view output, std::string_view what) {
    const auto answer = extract_answer(output, q.task);
    if (!answer || !answers_equal(*answer, q.gold_answer)) {
        throw ValidationError(std::string(what) + " for " + q.id + " does not grade correct");
    }
}

}  // namespace

std::string cot_input(std::string_view question) {
    return std::string(kQuestionPrefix) + std::string(question) + std::string(kCotSuffix);
}

std::optional<std::string> split_cot_input(std::string_view input) {
    if (!input.starts_with(kQuestionPrefix) || !input.ends_with(kCotSuffix)) return std::nullopt;
    if (input.size() < kQuestionPrefix.size() + kCotSuffix.size()) return std::nullopt;
    return std::string(input.substr(kQuestionPrefix.size(), input.size() - kQuestionPrefix.size() - kCotSuffix.size()));
}

std::string correction_input(std::string_view question, std::string_view path) {
    std::string out(kQuestionPrefix);
    out += question;
    out += "\nOriginal solution:\n";
    out += trim(path);
    out += "\n";
    out += kCorrectionInstruction;
    out += "\n";
    return out;
}

DatasetRecord render_cot_record(const Question& q, std::string_view path) {
    const auto answer = extract_answer(path, q.task);
    if (!answer || !answers_equal(*answer, q.gold_answer)) {
        throw ValidationError("CoT path for " + q.id + " does not reach the gold answer");
    }
    DatasetRecord r;
    r.input = cot_input(q.text);
    r.output = with_answer_line(path, q.gold_answer);
    r.kind = RecordKind::cot;
    r.source_ids.question_id = q.id;
    r.source_ids.path_hash = path_hash(path);
    require_correct(q, r.output, "CoT record");
    return r;
}

DatasetRecord render_correction_record(const Question& q, const Correction& c) {
    if (c.status != CorrectionStatus::kept) {
        throw ValidationError("correction for " + c.question_id + " has status " + std::string(to_string(c.status)));
    }
    DatasetRecord r;
    r.input = correction_input(q.text, c.path_text);
    r.output = std::string(trim(render_correction(c)));
    r.kind = RecordKind::correction;
    r.source_ids.question_id = q.id;
    r.source_ids.path_hash = c.path_hash;
    return r;
}

DatasetRecord extract_corrected_cot(const Question& q, const Correction& c) {
    if (c.status != CorrectionStatus::kept) {
        throw ValidationError("correction for " + c.question_id + " has status " + std::string(to_string(c.status)));
    }
    if (trim(c.corrected_solution).empty()) {
        throw ValidationError("correction for " + c.question_id + " has no corrected solution");
    }
    DatasetRecord r;
    r.input = cot_input(q.text);
    r.output = std::string(trim(c.corrected_solution));
    r.kind = RecordKind::cot;
    r.source_ids.question_id = q.id;
    r.source_ids.path_hash = c.path_hash;
    r.source_ids.derived_from = "corrected_cot";
    require_correct(q, r.output, "corrected solution");
    return r;
}

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::cot_only: return "cot_only";
        case Variant::lema: return "lema";
        case Variant::lema_size_matched: return "lema_size_matched";
        case Variant::cot_from_corrections: return "cot_from_corrections";
        case Variant::cot_token_matched: return "cot_token_matched";
    }
    return "lema";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept {
    for (auto v : {Variant::cot_only, Variant::lema, Variant::lema_size_matched, Variant::cot_from_corrections,
                   Variant::cot_token_matched}) {
        if (to_string(v) == text) return v;
    }
    return std::nullopt;
}

void validate(const AssemblyPlan& plan) {
    if (plan.variant == Variant::lema_size_matched && !plan.target_size) {
        throw ValidationError("lema_size_matched needs a target size");
    }
    if (plan.variant == Variant::cot_token_matched && !plan.target_tokens) {
        throw ValidationError("cot_token_matched needs a target token count");
    }
    if (plan.target_tokens && *plan.target_tokens < 0) throw ValidationError("target tokens must be >= 0");
    get_tokenizer(plan.tokenizer_id);
}

std::string encode(const Manifest& m) {
    detail::Json j;
    j["v"] = kSchemaVersion;
    j["variant"] = m.variant;
    j["seed"] = m.seed;
    j["tokenizer"] = m.tokenizer;
    j["shuffle"] = "uniform";
    j["records"] = m.records;
    j["counts"] = {{"cot", m.cot_records}, {"correction", m.correction_records}};
    j["tokens"] = {{"total", m.tokens}, {"cot", m.cot_tokens}, {"correction", m.correction_tokens}};
    if (m.target_size) j["target_size"] = *m.target_size;
    if (m.target_tokens) j["target_tokens"] = *m.target_tokens;
    if (m.added_records || m.removed_records) {
        j["token_matching"] = {{"added", m.added_records}, {"removed", m.removed_records}};
    }
    return j.dump(2) + "\n";
}

Assembly assemble(const AssemblyPlan& plan, const Corpus& corpus, std::span<const ReasoningPath> cot_pool,
                  std::span<const Correction> corrections, std::span<const ReasoningPath> extra_cot) {
    validate(plan);
    const Tokenizer& tok = get_tokenizer(plan.tokenizer_id);
    auto tokens_of = [&](DatasetRecord& r) {
        if (!r.token_count) r.token_count = tok.count(r.input) + tok.count(r.output);
        return *r.token_count;
    };

    std::vector<DatasetRecord> cot;
    cot.reserve(cot_pool.size());
    for (const auto& p : cot_pool) cot.push_back(render_cot_record(corpus.at(p.question_id), p.text));

    std::vector<const Correction*> kept;
    for (const auto& c : corrections) {
        if (c.status == CorrectionStatus::kept) kept.push_back(&c);
    }

    Manifest m;
    m.variant = std::string(to_string(plan.variant));
    m.seed = plan.rng_seed;
    m.tokenizer = plan.tokenizer_id;
    m.target_size = plan.target_size;
    m.target_tokens = plan.target_tokens;

    std::vector<DatasetRecord> out;
    auto add_corrections = [&] {
        for (const Correction* c : kept) out.push_back(render_correction_record(corpus.at(c->question_id), *c));
    };

    switch (plan.variant) {
        case Variant::cot_only:
            out = std::move(cot);
            break;
        case Variant::lema:
            out = std::move(cot);
            add_corrections();
            break;
        case Variant::lema_size_matched: {
            const std::size_t target = *plan.target_size;
            if (target < kept.size()) {
                throw ValidationError("target size " + std::to_string(target) + " is below the " +
                                      std::to_string(kept.size()) + " correction records, which are never dropped");
            }
            const std::size_t need = target - kept.size();
            if (need > cot.size()) {
                throw ValidationError("CoT pool short by " + std::to_string(need - cot.size()) + " records for target " +
                                      std::to_string(target));
            }
            std::vector<std::size_t> order(cot.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            Rng rng = stream(plan.rng_seed, kSubsetStream);
            rng.shuffle(order);
            order.resize(need);
            std::sort(order.begin(), order.end());
            for (std::size_t i : order) out.push_back(std::move(cot[i]));
            add_corrections();
            break;
        }
        case Variant::cot_from_corrections:
            out = std::move(cot);
            for (const Correction* c : kept) out.push_back(extract_corrected_cot(corpus.at(c->question_id), *c));
            break;
        case Variant::cot_token_matched: {
            const std::int64_t target = *plan.target_tokens;
            auto within = [target](std::int64_t total) {
                const std::int64_t diff = total > target ? total - target : target - total;
                return diff * 100 <= target;
            };
            // Largest total still inside the band: target + floor(target/100).
            const std::int64_t upper = target + target / 100;
            std::int64_t total = 0;
            for (auto& r : cot) total += tokens_of(r);
            out = std::move(cot);
            if (total > upper) {
                std::vector<std::size_t> order(out.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                Rng rng = stream(plan.rng_seed, kSubsetStream);
                rng.shuffle(order);
                std::vector<bool> drop(out.size(), false);
                const std::int64_t lower = target - target / 100;
                for (std::size_t i : order) {
                    if (total <= upper) break;
                    const std::int64_t t = *out[i].token_count;
                    if (total - t >= lower) {
                        total -= t;
                        drop[i] = true;
                        ++m.removed_records;
                    }
                }
                std::vector<DatasetRecord> kept_records;
                for (std::size_t i = 0; i < out.size(); ++i) {
                    if (!drop[i]) kept_records.push_back(std::move(out[i]));
                }
                out = std::move(kept_records);
            } else if (!within(total)) {
                std::vector<DatasetRecord> extra;
                extra.reserve(extra_cot.size());
                for (const auto& p : extra_cot) extra.push_back(render_cot_record(corpus.at(p.question_id), p.text));
                Rng rng = stream(plan.rng_seed, kExtraStream);
                rng.shuffle(extra);
                for (auto& r : extra) {
                    if (within(total)) break;
                    const std::int64_t t = tokens_of(r);
                    if (total + t <= upper) {
                        total += t;
                        out.push_back(std::move(r));
                        ++m.added_records;
                    }
                }
            }
            if (!within(total)) {
                const std::int64_t gap = total < target ? target - total : total - target;
                throw ValidationError("cannot reach " + std::to_string(target) + " tokens within 1%: " +
                                      std::to_string(total) + " tokens, off by " + std::to_string(gap) +
                                      (total < target ? " (extra CoT pool too small)" : ""));
            }
            break;
        }
    }

    for (auto& r : out) {
        const std::int64_t t = tokens_of(r);
        m.tokens += t;
        if (r.kind == RecordKind::cot) {
            ++m.cot_records;
            m.cot_tokens += t;
        } else {
            ++m.correction_records;
            m.correction_tokens += t;
        }
    }
    m.records = out.size();
    Rng rng = stream(plan.rng_seed, kShuffleStream);
    rng.shuffle(out);
    return {std::move(out), std::move(m)};
}

}  // namespace lema
