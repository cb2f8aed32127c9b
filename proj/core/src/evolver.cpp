// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/evolver.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "json_codec.hpp"
#include "lema/answer.hpp"
#include "lema/error.hpp"
#include "lema/parallel.hpp"
#include "lema/rng.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

using detail::Json;

constexpr std::string_view kNewQuestionLabel = "new question:";

struct JournalEntry {
    std::size_t index = 0;
    std::string seed_id;
    std::string text;
    std::optional<AnswerValue> label;
    std::string reason;
};

std::string encode_entry(const JournalEntry& e, int round) {
    Json j;
    j["v"] = kSchemaVersion;
    j["round"] = round;
    j["index"] = e.index;
    j["seed_id"] = e.seed_id;
    j["text"] = e.text;
    j["label"] = e.label ? detail::answer_to_json(*e.label) : Json(nullptr);
    j["reason"] = e.reason;
    return detail::dump_line(j);
}

/// Reads the journal, dropping a torn final line left by a crash.
std::map<std::size_t, JournalEntry> load_journal(const std::filesystem::path& path, const Corpus& corpus,
                                                 const std::vector<Question>& seeds, int round) {
    std::map<std::size_t, JournalEntry> entries;
    std::ifstream in(path, std::ios::binary);
    if (!in) return entries;
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    std::size_t pos = 0;
    std::size_t valid_bytes = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        const bool last = end == std::string::npos;
        if (last) end = content.size();
        ++line_no;
        const std::string_view line(content.data() + pos, end - pos);
        try {
            if (last) throw ValidationError("unterminated line");
            const Json j = detail::parse_object(line);
            JournalEntry e;
            e.index = j.at("index").get<std::size_t>();
            e.seed_id = j.at("seed_id").get<std::string>();
            e.text = j.at("text").get<std::string>();
            e.reason = j.at("reason").get<std::string>();
            if (j.at("round").get<int>() != round) {
                throw IntegrityError("journal " + path.string() + " belongs to round " +
                                     std::to_string(j.at("round").get<int>()));
            }
            if (e.index >= seeds.size() || seeds[e.index].id != e.seed_id) {
                throw IntegrityError("journal " + path.string() + " does not match this round's seed draws");
            }
            if (!j.at("label").is_null()) e.label = detail::answer_from_json(j.at("label"), corpus.at(e.seed_id).task);
            entries[e.index] = std::move(e);
        } catch (const IntegrityError&) {
            throw;
        } catch (const std::exception& ex) {
            if (!last) throw ParseError(path.string(), line_no, ex.what());
            break;
        }
        valid_bytes = end + 1;
        pos = end + 1;
    }
    if (valid_bytes < content.size()) std::filesystem::resize_file(path, valid_bytes);
    return entries;
}

}  // namespace

std::string_view to_string(SeedStrategy s) noexcept {
    return s == SeedStrategy::correction_centric ? "correction_centric" : "general";
}

std::optional<SeedStrategy> parse_seed_strategy(std::string_view text) noexcept {
    if (text == "correction_centric") return SeedStrategy::correction_centric;
    if (text == "general") return SeedStrategy::general;
    return std::nullopt;
}

std::string_view to_string(SeedWeighting w) noexcept { return w == SeedWeighting::multiplicity ? "multiplicity" : "unique"; }

std::optional<SeedWeighting> parse_seed_weighting(std::string_view text) noexcept {
    if (text == "multiplicity") return SeedWeighting::multiplicity;
    if (text == "unique") return SeedWeighting::unique;
    return std::nullopt;
}

std::vector<Question> sample_seeds(std::span<const Correction> corrections, const Corpus& corpus, std::size_t n,
                                   SeedStrategy strategy, std::uint64_t rng_seed, SeedWeighting weighting) {
    std::vector<const Question*> tickets;
    if (strategy == SeedStrategy::correction_centric) {
        std::vector<std::string> ids;
        for (const auto& c : corrections) {
            if (c.status == CorrectionStatus::kept) ids.push_back(c.question_id);
        }
        // Sorted so the draw does not depend on file order.
        std::sort(ids.begin(), ids.end());
        if (weighting == SeedWeighting::unique) ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (const auto& id : ids) tickets.push_back(&corpus.at(id));
        if (tickets.empty()) throw ValidationError("no kept corrections to draw seed questions from");
    } else {
        for (const auto& q : corpus.questions()) tickets.push_back(&q);
        if (tickets.empty()) throw ValidationError("empty corpus: no seed questions to draw");
    }
    Rng rng(rng_seed);
    std::vector<Question> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(*tickets[rng.below(tickets.size())]);
    return out;
}

EvolveOutcome accept_evolved(std::string_view raw, std::string_view seed_text) {
    std::string_view s = trim(raw);
    if (istarts_with(s, kNewQuestionLabel)) s = trim(s.substr(kNewQuestionLabel.size()));
    if (s.empty()) return {"", "empty"};
    if (normalize_whitespace(s) == normalize_whitespace(seed_text)) return {"", "identical_to_seed"};
    return {std::string(s), ""};
}

EvolveOutcome evolve(Gateway& gateway, const EndpointSpec& evolver, const Prompt& prompt, const Question& seed,
                     double temperature, std::optional<std::uint64_t> sample_seed) {
    SampleRequest req;
    req.prompt = prompt.render(seed.text);
    req.temperature = temperature;
    req.seed = sample_seed;
    const SampleResult r = gateway.sample(evolver, req);
    return accept_evolved(r.texts.empty() ? std::string_view{} : std::string_view(r.texts.front()), seed.text);
}

std::optional<AnswerValue> majority_vote(std::span<const std::optional<AnswerValue>> votes) {
    for (std::size_t i = 0; i < votes.size(); ++i) {
        if (!votes[i]) continue;
        std::size_t agree = 0;
        for (const auto& other : votes) {
            if (other && answers_equal(*votes[i], *other)) ++agree;
        }
        if (2 * agree > votes.size()) return votes[i];
    }
    return std::nullopt;
}

VoteResult label_by_vote(Gateway& gateway, const EndpointSpec& labeler, const Prompt& prompt, const Question& q,
                         int k, double temperature, std::optional<std::uint64_t> sample_seed) {
    if (k < 1) throw ValidationError("vote count must be >= 1");
    SampleRequest req;
    req.prompt = prompt.render(q.text);
    req.n = k;
    req.temperature = temperature;
    req.seed = sample_seed;
    const SampleResult r = gateway.sample(labeler, req);
    VoteResult out;
    for (int i = 0; i < k; ++i) {
        out.votes.push_back(static_cast<std::size_t>(i) < r.texts.size() ? extract_answer(r.texts[i], q.task)
                                                                          : std::nullopt);
    }
    out.label = majority_vote(out.votes);
    return out;
}

std::string evolved_id(std::string_view parent, int round, std::size_t index) {
    return std::string(parent) + "/evo/" + std::to_string(round) + "/" + std::to_string(index);
}

RoundResult run_round(Gateway& gateway, const PromptRegistry& prompts, std::span<const Correction> corrections,
                      const Corpus& corpus, const EndpointSpec& evolver, const EndpointSpec& labeler,
                      const RoundConfig& cfg) {
    if (cfg.round_index < 1) throw ValidationError("round index must be >= 1");
    RoundResult result;
    if (cfg.n_seeds == 0) return result;

    const Prompt& evolve_prompt = prompts.get(cfg.evolve_prompt_id, PromptRole::evolution);
    const Prompt& label_prompt = prompts.get(cfg.label_prompt_id, PromptRole::reasoning);
    const auto seeds = sample_seeds(corrections, corpus, cfg.n_seeds, cfg.strategy, cfg.rng_seed, cfg.weighting);

    std::map<std::size_t, JournalEntry> done;
    std::ofstream journal;
    if (cfg.journal) {
        done = load_journal(*cfg.journal, corpus, seeds, cfg.round_index);
        if (cfg.journal->has_parent_path()) std::filesystem::create_directories(cfg.journal->parent_path());
        journal.open(*cfg.journal, std::ios::binary | std::ios::app);
        if (!journal) throw IoError("cannot open journal " + cfg.journal->string());
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (!done.contains(i)) pending.push_back(i);
    }
    if (cfg.max_new_items && pending.size() > *cfg.max_new_items) {
        pending.resize(*cfg.max_new_items);
        result.complete = false;
    }

    std::mutex mutex;
    const int workers = std::max(evolver.max_concurrency, labeler.max_concurrency);
    parallel_for(pending.size(), workers, [&](std::size_t p) {
        const std::size_t index = pending[p];
        const Question& seed = seeds[index];
        JournalEntry e;
        e.index = index;
        e.seed_id = seed.id;
        const EvolveOutcome evolved = evolve(gateway, evolver, evolve_prompt, seed, cfg.evolve_temperature, index);
        if (!evolved.ok()) {
            e.reason = evolved.rejection;
        } else {
            e.text = evolved.text;
            Question probe = seed;
            probe.text = evolved.text;
            const VoteResult vote =
                label_by_vote(gateway, labeler, label_prompt, probe, cfg.votes, cfg.label_temperature, index);
            e.label = vote.label;
            if (!e.label) e.reason = "no_majority";
        }
        std::lock_guard lock(mutex);
        if (journal.is_open()) {
            journal << encode_entry(e, cfg.round_index) << '\n';
            journal.flush();
        }
        done[index] = std::move(e);
    });

    // Textual dedup in draw order, against the corpus and earlier draws.
    std::set<std::string> seen;
    for (const auto& q : corpus.questions()) seen.insert(normalize_whitespace(q.text));
    for (const auto& [index, e] : done) {
        if (!e.reason.empty()) {
            result.discards.push_back({index, e.seed_id, e.reason});
            continue;
        }
        if (!seen.insert(normalize_whitespace(e.text)).second) {
            result.discards.push_back({index, e.seed_id, "duplicate"});
            continue;
        }
        const Question& seed = seeds[index];
        Question q;
        q.id = evolved_id(seed.id, cfg.round_index, index);
        q.task = seed.task;
        q.text = e.text;
        q.gold_answer = *e.label;
        q.origin = Origin::evolved;
        q.parent_id = seed.id;
        validate(q);
        result.evolved.push_back(std::move(q));
    }
    return result;
}

std::string encode(const Discard& d) {
    Json j;
    j["v"] = kSchemaVersion;
    j["index"] = d.index;
    j["seed_id"] = d.seed_id;
    j["reason"] = d.reason;
    return detail::dump_line(j);
}

}  // namespace lema
