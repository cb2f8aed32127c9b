// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/collector.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "json_codec.hpp"
#include "lema/answer.hpp"
#include "lema/text.hpp"

namespace lema {

ReasoningPath grade_path(const Question& q, std::string generator, std::string text, SampleParams params) {
    ReasoningPath p;
    p.question_id = q.id;
    p.generator = generator;
    p.extracted = extract_answer(text, q.task);
    p.unexpected_format = !p.extracted.has_value();
    p.correct = p.extracted && answers_equal(*p.extracted, q.gold_answer);
    p.text = std::move(text);
    p.sample_params = std::move(params);
    p.provenance = {std::move(generator)};
    return p;
}

std::vector<ReasoningPath> merge_pools(std::span<const std::vector<ReasoningPath>> pools, const Corpus* corpus) {
    struct Group {
        ReasoningPath representative;
        std::set<std::string> generators;
    };
    std::map<std::pair<std::string, std::string>, Group> groups;
    for (const auto& pool : pools) {
        for (const auto& path : pool) {
            if (corpus) corpus->at(path.question_id);
            auto key = std::make_pair(path.question_id, normalize_whitespace(path.text));
            auto [it, inserted] = groups.try_emplace(std::move(key));
            Group& g = it->second;
            const std::string& lead = path.provenance.empty() ? path.generator : path.provenance.front();
            if (inserted || std::tie(lead, path.text) < std::tie(g.representative.provenance.front(), g.representative.text)) {
                g.representative = path;
                if (g.representative.provenance.empty()) g.representative.provenance = {path.generator};
            }
            g.generators.insert(path.generator);
            g.generators.insert(path.provenance.begin(), path.provenance.end());
        }
    }

    std::vector<ReasoningPath> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) {
        ReasoningPath p = std::move(g.representative);
        p.provenance.assign(g.generators.begin(), g.generators.end());
        p.generator = p.provenance.front();
        out.push_back(std::move(p));
    }
    std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> keys;
    keys.reserve(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        keys.emplace_back(out[i].question_id, out[i].generator, path_hash(out[i].text), i);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<ReasoningPath> sorted;
    sorted.reserve(out.size());
    for (const auto& k : keys) sorted.push_back(std::move(out[std::get<3>(k)]));
    return sorted;
}

CollectResult collect(Gateway& gateway, const PromptRegistry& prompts, std::span<const Question> questions,
                      std::span<const EndpointSpec> reasoners, const CollectConfig& cfg) {
    if (cfg.samples_per_question < 1) throw ValidationError("samples_per_question must be >= 1");
    const Prompt& prompt = prompts.get(cfg.prompt_id, PromptRole::reasoning);

    std::vector<SampleRequest> requests;
    requests.reserve(questions.size());
    for (const auto& q : questions) {
        SampleRequest req;
        req.prompt = prompt.render(q.text);
        req.n = cfg.samples_per_question;
        req.temperature = cfg.temperature;
        req.max_tokens = cfg.max_tokens;
        req.seed = cfg.seed;
        requests.push_back(std::move(req));
    }

    CollectResult result;
    std::vector<std::vector<ReasoningPath>> incorrect_pools;
    std::vector<std::vector<ReasoningPath>> correct_pools;
    std::vector<std::vector<ReasoningPath>> format_pools;
    std::map<std::string, std::size_t> transport_failures;

    for (const auto& reasoner : reasoners) {
        const auto outcomes = gateway.sample_all(reasoner, requests);
        auto& incorrect = incorrect_pools.emplace_back();
        auto& correct = correct_pools.emplace_back();
        auto& unparsed = format_pools.emplace_back();
        for (std::size_t i = 0; i < questions.size(); ++i) {
            const Question& q = questions[i];
            const auto& outcome = outcomes[i];
            if (!outcome.ok()) {
                if (outcome.auth_failure) throw AuthError(outcome.error, outcome.status, 1);
                result.failures.push_back({q.id, reasoner.id(), "transport", outcome.error});
                ++transport_failures[q.id];
                continue;
            }
            for (const auto& text : outcome.value->texts) {
                if (trim(text).empty()) continue;
                SampleParams params{cfg.temperature, cfg.seed, cfg.prompt_id};
                ReasoningPath p = grade_path(q, reasoner.id(), text, std::move(params));
                if (p.unexpected_format) {
                    unparsed.push_back(std::move(p));
                } else if (p.correct) {
                    correct.push_back(std::move(p));
                } else {
                    incorrect.push_back(std::move(p));
                }
            }
        }
    }

    result.incorrect = merge_pools(incorrect_pools);
    result.correct = merge_pools(correct_pools);
    result.unexpected_format = merge_pools(format_pools);
    for (const auto& p : result.unexpected_format) {
        result.failures.push_back({p.question_id, p.generator, "unexpected_format", path_hash(p.text)});
    }
    for (const auto& [id, count] : transport_failures) {
        if (count == reasoners.size()) {
            result.failures.push_back({id, "", "all_transport_failed", "every sample request failed"});
        }
    }
    std::stable_sort(result.failures.begin(), result.failures.end(), [](const auto& a, const auto& b) {
        return std::tie(a.question_id, a.kind, a.generator, a.detail) < std::tie(b.question_id, b.kind, b.generator, b.detail);
    });
    return result;
}

std::string encode(const FailureEntry& entry) {
    detail::Json j;
    j["v"] = kSchemaVersion;
    j["question_id"] = entry.question_id;
    j["generator"] = entry.generator;
    j["kind"] = entry.kind;
    j["detail"] = entry.detail;
    return detail::dump_line(j);
}

}  // namespace lema
