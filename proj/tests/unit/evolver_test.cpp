// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "lema/corpus.hpp"
#include "lema/error.hpp"
#include "lema/evolver.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

using test::Json;
using test::Mock;
using test::num;

std::vector<std::optional<AnswerValue>> votes(std::initializer_list<const char*> vs) {
    std::vector<std::optional<AnswerValue>> out;
    for (const char* v : vs) out.push_back(v ? std::optional(num(v)) : std::nullopt);
    return out;
}

std::string vote(std::initializer_list<const char*> vs) {
    const auto v = votes(vs);
    const auto r = majority_vote(v);
    return r ? r->render() : "<discard>";
}

TEST(Evolver, MajorityVote) {
    EXPECT_EQ(vote({"7", "7", "9"}), "7");
    EXPECT_EQ(vote({"7", "8", "9"}), "<discard>");
    EXPECT_EQ(vote({"7", "7", "7"}), "7");
    EXPECT_EQ(vote({"7", nullptr, "7"}), "7");
    EXPECT_EQ(vote({nullptr, nullptr, nullptr}), "<discard>");
    EXPECT_EQ(vote({"7", "7", "8", "8"}), "<discard>");
    EXPECT_EQ(vote({"0.3333333", "0.333333", "1"}), "0.3333333");
    EXPECT_EQ(vote({}), "<discard>");
}

Correction kept(std::string qid) {
    Correction c;
    c.question_id = std::move(qid);
    c.status = CorrectionStatus::kept;
    return c;
}

TEST(Evolver, SeedWeightsFollowMultiplicity) {
    const Corpus corpus({test::question("A", "a", "1"), test::question("B", "b", "2"), test::question("C", "c", "3")});
    std::vector<Correction> cs{kept("A"), kept("A"), kept("A"), kept("B")};
    auto wrong = kept("C");
    wrong.status = CorrectionStatus::wrong_answer;
    cs.push_back(wrong);

    const std::size_t n = 10000;
    std::map<std::string, double> counts;
    for (const auto& q : sample_seeds(cs, corpus, n, SeedStrategy::correction_centric, 17)) counts[q.id] += 1;
    EXPECT_EQ(counts.count("C"), 0u);
    // Chi-square against 3:1 with one degree of freedom; 3 sigma is 9.
    const double ea = n * 0.75, eb = n * 0.25;
    const double chi = std::pow(counts["A"] - ea, 2) / ea + std::pow(counts["B"] - eb, 2) / eb;
    EXPECT_LT(chi, 9.0);

    std::map<std::string, double> unique;
    for (const auto& q : sample_seeds(cs, corpus, n, SeedStrategy::correction_centric, 17, SeedWeighting::unique)) {
        unique[q.id] += 1;
    }
    EXPECT_NEAR(unique["A"] / n, 0.5, 0.03);
}

TEST(Evolver, SeedSamplingEdgeCases) {
    const Corpus corpus({test::question("A", "a", "1"), test::question("B", "b", "2")});
    const std::vector<Correction> cs{kept("A")};
    EXPECT_TRUE(sample_seeds(cs, corpus, 0, SeedStrategy::correction_centric, 1).empty());
    EXPECT_THROW(sample_seeds({}, corpus, 3, SeedStrategy::correction_centric, 1), ValidationError);
    const auto g1 = sample_seeds(cs, corpus, 50, SeedStrategy::general, 9);
    const auto g2 = sample_seeds(cs, corpus, 50, SeedStrategy::general, 9);
    EXPECT_EQ(g1, g2);
    EXPECT_TRUE(std::any_of(g1.begin(), g1.end(), [](const Question& q) { return q.id == "B"; }));
}

TEST(Evolver, AcceptEvolved) {
    EXPECT_EQ(accept_evolved("New question: How many pens? ", "How many apples?").text, "How many pens?");
    EXPECT_EQ(accept_evolved("   ", "x").rejection, "empty");
    EXPECT_EQ(accept_evolved("How many  apples?\n", "How many apples?").rejection, "identical_to_seed");
}

TEST(Evolver, EvolvedIdsEncodeLineage) { EXPECT_EQ(evolved_id("gsm8k-3", 2, 7), "gsm8k-3/evo/2/7"); }

/// Ten seeds q0..q9, each with an evolver rule; labels agree except for the
/// seeds listed in `split`.
Json round_rules(std::set<int> split) {
    Json rules = Json::array();
    for (int i = 0; i < 10; ++i) {
        const std::string tag = "[s" + std::to_string(i) + "]";
        const std::string etag = "[e" + std::to_string(i) + "]";
        rules.push_back(test::rule("evo", {"Given problem:", tag}, {"New question: Harder one " + etag}));
        if (split.count(i)) {
            rules.push_back(test::rule("lab", {etag}, {"The answer is 1.", "The answer is 2.", "The answer is 3."}));
        } else {
            rules.push_back(test::rule("lab", {etag}, {"The answer is 5.", "The answer is 5.", "The answer is 6."}));
        }
    }
    return rules;
}

struct RoundFixture {
    Corpus corpus;
    std::vector<Correction> cs;
    RoundFixture() {
        std::vector<Question> qs;
        for (int i = 0; i < 10; ++i) {
            qs.push_back(test::question("q" + std::to_string(i), "Seed [s" + std::to_string(i) + "]", "1"));
            cs.push_back(kept("q" + std::to_string(i)));
        }
        corpus = Corpus(std::move(qs));
    }
};

TEST(Evolver, RunRoundCountsDiscards) {
    Mock mock(round_rules({2, 7}));
    RoundFixture f;
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    RoundConfig cfg;
    cfg.n_seeds = 10;
    cfg.strategy = SeedStrategy::general;
    // Draws are with replacement, so repeated seeds show up as duplicates.
    const auto seeds = sample_seeds(f.cs, f.corpus, 10, cfg.strategy, cfg.rng_seed);
    const auto res = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    EXPECT_TRUE(res.complete);
    std::size_t split = 0, dup = 0;
    std::set<std::string> seen;
    for (const auto& s : seeds) {
        if (s.id == "q2" || s.id == "q7") ++split;
        else if (!seen.insert(s.id).second) ++dup;
    }
    EXPECT_EQ(res.evolved.size() + res.discards.size(), 10u);
    EXPECT_EQ(res.evolved.size(), 10u - split - dup);
    for (const auto& q : res.evolved) {
        EXPECT_EQ(q.origin, Origin::evolved);
        EXPECT_EQ(q.gold_answer.render(), "5");
        ASSERT_TRUE(q.parent_id.has_value());
        EXPECT_TRUE(q.id.starts_with(*q.parent_id + "/evo/1/"));
    }
    for (const auto& d : res.discards) EXPECT_TRUE(d.reason == "no_majority" || d.reason == "duplicate") << d.reason;
}

TEST(Evolver, RunRoundTenSeedsTwoSplitVotes) {
    // The evolver's reply varies with the draw index (the request seed), so
    // no two draws collide; the labeler splits on draws 2 and 7 only.
    Json rules = Json::array();
    std::vector<std::string> variants;
    for (int k = 0; k < 10; ++k) variants.push_back("New question: Harder one {v" + std::to_string(k) + "}");
    rules.push_back(test::rule("evo", {"Given problem:"}, variants));
    for (const char* split : {"{v2}", "{v7}"}) {
        rules.push_back(test::rule("lab", {split}, {"The answer is 1.", "The answer is 2.", "The answer is 3."}));
    }
    rules.push_back(test::rule("lab", {"Harder one"}, {"The answer is 5.", "The answer is 5.", "The answer is 6."}));
    Mock mock(rules);
    RoundFixture f;
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    RoundConfig cfg;
    cfg.n_seeds = 10;
    cfg.rng_seed = 21;
    const auto res = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    EXPECT_EQ(res.evolved.size(), 8u);
    ASSERT_EQ(res.discards.size(), 2u);
    EXPECT_EQ(res.discards[0].index, 2u);
    EXPECT_EQ(res.discards[1].index, 7u);
    for (const auto& d : res.discards) EXPECT_EQ(d.reason, "no_majority");
}

TEST(Evolver, ZeroSeedsIsEmpty) {
    Mock mock(round_rules({}));
    RoundFixture f;
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    RoundConfig cfg;
    const auto res = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    EXPECT_TRUE(res.evolved.empty());
    EXPECT_TRUE(res.discards.empty());
    EXPECT_EQ(mock.server().stats().requests, 0);
}

TEST(Evolver, ResumeFromJournal) {
    Mock mock(round_rules({2, 7}));
    RoundFixture f;
    test::TempDir dir;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    RoundConfig cfg;
    cfg.n_seeds = 10;
    cfg.rng_seed = 4;

    Gateway gw;
    const auto full = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);

    cfg.journal = dir / "journal.jsonl";
    cfg.max_new_items = 5;
    const auto partial = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    EXPECT_FALSE(partial.complete);

    mock.server().reset();
    cfg.max_new_items.reset();
    const auto resumed = run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    EXPECT_TRUE(resumed.complete);
    EXPECT_EQ(resumed.evolved, full.evolved);
    ASSERT_EQ(resumed.discards.size(), full.discards.size());
    // Only the remaining five draws were sent to the evolver.
    EXPECT_EQ(mock.server().stats().by_model["evo"], 5);
}

TEST(Evolver, JournalFromAnotherRunIsRejected) {
    Mock mock(round_rules({}));
    RoundFixture f;
    test::TempDir dir;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    RoundConfig cfg;
    cfg.n_seeds = 4;
    cfg.journal = dir / "journal.jsonl";
    Gateway gw;
    run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg);
    cfg.round_index = 2;
    EXPECT_THROW(run_round(gw, prompts, f.cs, f.corpus, mock.endpoint("evo"), mock.endpoint("lab"), cfg),
                 IntegrityError);
}

}  // namespace
}  // namespace lema
