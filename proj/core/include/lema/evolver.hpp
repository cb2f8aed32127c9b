// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Correction-centric question evolution: draw seed questions from the kept
// corrections, ask an evolver model for a new question, and label it by
// majority vote over sampled solutions.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/gateway.hpp"
#include "lema/prompts.hpp"
#include "lema/types.hpp"

namespace lema {

enum class SeedStrategy { correction_centric, general };
enum class SeedWeighting { multiplicity, unique };

std::string_view to_string(SeedStrategy s) noexcept;
std::optional<SeedStrategy> parse_seed_strategy(std::string_view text) noexcept;
std::string_view to_string(SeedWeighting w) noexcept;
std::optional<SeedWeighting> parse_seed_weighting(std::string_view text) noexcept;

/// `n` draws with replacement. correction_centric draws from the question ids
/// of kept corrections (each kept correction is one ticket under
/// multiplicity, each distinct id one ticket under unique); general draws
/// uniformly from the corpus. Throws ValidationError on an empty source.
std::vector<Question> sample_seeds(std::span<const Correction> corrections, const Corpus& corpus, std::size_t n,
                                   SeedStrategy strategy, std::uint64_t rng_seed,
                                   SeedWeighting weighting = SeedWeighting::multiplicity);

/// An accepted evolved text, or the reason it was rejected.
struct EvolveOutcome {
    std::string text;
    std::string rejection;

    bool ok() const noexcept { return rejection.empty(); }
};

/// Cleans raw evolver output (trims, drops a leading "New question:" label)
/// and rejects empty text or text identical to the seed.
EvolveOutcome accept_evolved(std::string_view raw, std::string_view seed_text);

EvolveOutcome evolve(Gateway& gateway, const EndpointSpec& evolver, const Prompt& prompt, const Question& seed,
                     double temperature, std::optional<std::uint64_t> sample_seed);

/// Value held by a strict majority (more than half) of the votes, or nullopt.
/// Absent votes never agree with anything, including each other.
std::optional<AnswerValue> majority_vote(std::span<const std::optional<AnswerValue>> votes);

struct VoteResult {
    std::optional<AnswerValue> label;
    std::vector<std::optional<AnswerValue>> votes;
};

VoteResult label_by_vote(Gateway& gateway, const EndpointSpec& labeler, const Prompt& prompt, const Question& q,
                         int k, double temperature, std::optional<std::uint64_t> sample_seed);

struct RoundConfig {
    std::size_t n_seeds = 0;
    SeedStrategy strategy = SeedStrategy::correction_centric;
    SeedWeighting weighting = SeedWeighting::multiplicity;
    int round_index = 1;
    std::uint64_t rng_seed = 0;
    std::string evolve_prompt_id = std::string(kDefaultEvolutionPrompt);
    std::string label_prompt_id = std::string(kDefaultReasoningPrompt);
    double evolve_temperature = 0.7;
    double label_temperature = 0.7;
    int votes = 3;
    /// Append-only progress log; completed draws are not re-queried.
    std::optional<std::filesystem::path> journal;
    /// Stop after this many new draws (budgeted or interrupted runs).
    std::optional<std::size_t> max_new_items;
};

struct Discard {
    std::size_t index = 0;
    std::string seed_id;
    /// empty | identical_to_seed | no_majority | duplicate
    std::string reason;
};

struct RoundResult {
    std::vector<Question> evolved;
    std::vector<Discard> discards;
    /// False when max_new_items stopped the round early.
    bool complete = true;
};

/// Id of the question evolved from `parent` at draw `index` of `round`.
std::string evolved_id(std::string_view parent, int round, std::size_t index);

RoundResult run_round(Gateway& gateway, const PromptRegistry& prompts, std::span<const Correction> corrections,
                      const Corpus& corpus, const EndpointSpec& evolver, const EndpointSpec& labeler,
                      const RoundConfig& cfg);

std::string encode(const Discard& d);

}  // namespace lema
