// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/corpus.hpp"
#include "lema/corrector.hpp"
#include "lema/error.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

using test::Json;
using test::Mock;

const Question kQ = test::question("gsm8k-1", "Tom has 3 bags of 4 apples. How many apples? [c1]", "12");

ReasoningPath wrong_path() {
    ReasoningPath p;
    p.question_id = kQ.id;
    p.generator = "r";
    p.text = "Step 1: 3 + 4 = 7.\nThe answer is 7.";
    p.extracted = test::num("7");
    p.provenance = {"r"};
    return p;
}

constexpr const char* kFull =
    "Incorrect Step: Step 1.\nExplanation: The bags should be multiplied.\nCorrect Solution:\nStep 1: 3 * 4 = 12.\nThe "
    "answer is 12.\n";

TEST(Corrector, ParseFullSchema) {
    const auto p = parse_correction(kFull, CorrectionSchema::full);
    ASSERT_TRUE(p.ok());
    EXPECT_EQ(*p.incorrect_step, "Step 1.");
    EXPECT_EQ(*p.explanation, "The bags should be multiplied.");
    EXPECT_EQ(*p.corrected_solution, "Step 1: 3 * 4 = 12.\nThe answer is 12.");
}

TEST(Corrector, ParseIsOrderAndCaseInsensitive) {
    const std::string permuted =
        "correct solution:\nStep 1: 3 * 4 = 12.\nThe answer is 12.\nEXPLANATION: The bags should be multiplied.\n"
        "  Incorrect step: Step 1.";
    const auto a = parse_correction(kFull, CorrectionSchema::full);
    const auto b = parse_correction(permuted, CorrectionSchema::full);
    ASSERT_TRUE(b.ok());
    EXPECT_EQ(a.incorrect_step, b.incorrect_step);
    EXPECT_EQ(a.explanation, b.explanation);
    EXPECT_EQ(a.corrected_solution, b.corrected_solution);
}

TEST(Corrector, MissingSectionNamed) {
    const auto p = parse_correction("Incorrect Step: Step 1.\nCorrect Solution:\nThe answer is 12.", CorrectionSchema::full);
    EXPECT_FALSE(p.ok());
    EXPECT_EQ(p.missing, kExplanationHeader);
    const auto empty_body = parse_correction("Incorrect Step:\nExplanation: x\nCorrect Solution: y", CorrectionSchema::full);
    EXPECT_EQ(empty_body.missing, kIncorrectStepHeader);
}

TEST(Corrector, AblatedSchemasDropSections) {
    const auto no_expl = parse_correction(kFull, CorrectionSchema::no_explanation);
    ASSERT_TRUE(no_expl.ok());
    EXPECT_FALSE(no_expl.explanation.has_value());
    const auto no_step = parse_correction("Explanation: e\nCorrect Solution: The answer is 1.", CorrectionSchema::no_mistake_step);
    EXPECT_TRUE(no_step.ok());
    const auto no_sol = parse_correction("Incorrect Step: s\nExplanation: e", CorrectionSchema::no_corrected_solution);
    EXPECT_TRUE(no_sol.ok());
    EXPECT_FALSE(no_sol.corrected_solution.has_value());
}

TEST(Corrector, RenderParseRoundTrip) {
    Correction c;
    c.incorrect_step = "Step 2.";
    c.explanation = "Wrong operation.";
    c.corrected_solution = "Step 1: 2 * 2 = 4.\nThe answer is 4.";
    const auto p = parse_correction(render_correction(c), CorrectionSchema::full);
    EXPECT_EQ(p.incorrect_step, c.incorrect_step);
    EXPECT_EQ(p.explanation, c.explanation);
    EXPECT_EQ(*p.corrected_solution, c.corrected_solution);

    c.explanation.reset();
    EXPECT_EQ(render_correction(c).find("Explanation:"), std::string::npos);
}

TEST(Corrector, GradeStatuses) {
    EXPECT_EQ(grade_correction(kQ, wrong_path(), kFull, CorrectionSchema::full).status, CorrectionStatus::kept);

    const auto wrong = grade_correction(
        kQ, wrong_path(), "Incorrect Step: 1\nExplanation: e\nCorrect Solution:\nThe answer is 13.", CorrectionSchema::full);
    EXPECT_EQ(wrong.status, CorrectionStatus::wrong_answer);

    const auto missing = grade_correction(kQ, wrong_path(), "Explanation: e\nCorrect Solution:\nThe answer is 12.",
                                          CorrectionSchema::full);
    EXPECT_EQ(missing.status, CorrectionStatus::parse_failed);
    EXPECT_EQ(missing.parse_error, "missing section Incorrect Step:");

    const auto no_answer = grade_correction(
        kQ, wrong_path(), "Incorrect Step: 1\nExplanation: e\nCorrect Solution:\n3 * 4 is twelve.", CorrectionSchema::full);
    EXPECT_EQ(no_answer.status, CorrectionStatus::parse_failed);
    EXPECT_EQ(no_answer.parse_error, "no final answer");

    // The gold answer in the explanation must not rescue a wrong solution.
    const auto mention = grade_correction(
        kQ, wrong_path(), "Incorrect Step: 1\nExplanation: The answer is 12.\nCorrect Solution:\nThe answer is 9.",
        CorrectionSchema::full);
    EXPECT_EQ(mention.status, CorrectionStatus::wrong_answer);
}

TEST(Corrector, NoSolutionSchemaGradesWholeOutput) {
    const auto c = grade_correction(kQ, wrong_path(), "Incorrect Step: 1\nExplanation: multiply, the answer is 12.",
                                    CorrectionSchema::no_corrected_solution);
    EXPECT_EQ(c.status, CorrectionStatus::kept);
}

TEST(Corrector, CsqaNeverRequiresTheStep) {
    EXPECT_EQ(effective_schema(Task::CSQA, CorrectionSchema::full), CorrectionSchema::no_mistake_step);
    EXPECT_EQ(effective_schema(Task::GSM8K, CorrectionSchema::full), CorrectionSchema::full);
}

TEST(Corrector, GenerateAgainstMock) {
    Mock mock(Json::array({test::rule("c", {"[c1]"}, {kFull})}));
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    const Corpus corpus({kQ});
    const std::vector<ReasoningPath> pool{wrong_path()};
    const auto out = generate(gw, prompts, corpus, pool, mock.endpoint("c"), CorrectConfig{});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].status, CorrectionStatus::kept);
    EXPECT_EQ(out[0].path_text, pool[0].text);
}

TEST(Corrector, GenerateResamplesUntilKept) {
    Mock mock(Json::array({test::rule(
        "c", {"[c1]"}, {"Incorrect Step: 1\nExplanation: e\nCorrect Solution:\nThe answer is 13.", kFull})}));
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    const Corpus corpus({kQ});
    const std::vector<ReasoningPath> pool{wrong_path()};
    CorrectConfig cfg;
    cfg.attempts = 2;
    EXPECT_EQ(generate(gw, prompts, corpus, pool, mock.endpoint("c"), cfg)[0].status, CorrectionStatus::kept);
}

TEST(Corrector, GenerateFailsOnTransportError) {
    Json broken = test::rule("c", {}, {"x"});
    broken["always_status"] = 500;
    Mock mock(Json::array({broken}));
    Gateway gw;
    const auto prompts = PromptRegistry::load(LEMA_PROMPTS_DIR);
    const Corpus corpus({kQ});
    const std::vector<ReasoningPath> pool{wrong_path()};
    EXPECT_THROW(generate(gw, prompts, corpus, pool, mock.endpoint("c"), CorrectConfig{}), TransportError);
}

Correction with(std::string gen, CorrectionStatus status, std::optional<int> level = std::nullopt) {
    Correction c;
    c.generator = std::move(gen);
    c.status = status;
    c.difficulty = level;
    return c;
}

TEST(Corrector, SuccessRate) {
    std::vector<Correction> cs;
    for (int i = 0; i < 4; ++i) cs.push_back(with("a", i < 3 ? CorrectionStatus::kept : CorrectionStatus::wrong_answer));
    for (int i = 0; i < 5; ++i) cs.push_back(with("b", i < 1 ? CorrectionStatus::kept : CorrectionStatus::parse_failed));
    cs.push_back(with("c", CorrectionStatus::wrong_answer));
    const auto rows = success_rate(cs, SuccessGroup::generator);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].group, "a");
    EXPECT_EQ(rows[0].rate, Rational(3, 4));
    EXPECT_EQ(rows[1].rate, Rational(1, 5));
    EXPECT_EQ(rows[2].kept, 0);
    EXPECT_EQ(render_rate(rows[0].rate), "75.0%");
    EXPECT_TRUE(success_rate({}, SuccessGroup::generator).empty());
}

TEST(Corrector, SuccessRateByDifficulty) {
    std::vector<Correction> cs{with("a", CorrectionStatus::kept, 2), with("a", CorrectionStatus::wrong_answer),
                               with("a", CorrectionStatus::kept, 10), with("a", CorrectionStatus::wrong_answer, 2)};
    const auto rows = success_rate(cs, SuccessGroup::difficulty);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].group, "Level 2");
    EXPECT_EQ(rows[1].group, "Level 10");
    EXPECT_EQ(rows[2].group, "unknown");
}

}  // namespace
}  // namespace lema
