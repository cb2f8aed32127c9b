// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/error.hpp"
#include "lema/prompts.hpp"

namespace lema {
namespace {

TEST(Prompts, ShippedRegistryLoads) {
    const auto reg = PromptRegistry::load(LEMA_PROMPTS_DIR);
    EXPECT_EQ(reg.get(kDefaultReasoningPrompt, PromptRole::reasoning).role, PromptRole::reasoning);
    EXPECT_EQ(reg.get(kDefaultEvolutionPrompt, PromptRole::evolution).role, PromptRole::evolution);
    EXPECT_EQ(reg.get(kDefaultInstructionPrompt, PromptRole::instruction).role, PromptRole::instruction);
    for (auto schema : {CorrectionSchema::full, CorrectionSchema::no_mistake_step, CorrectionSchema::no_explanation,
                        CorrectionSchema::no_corrected_solution}) {
        const auto& p = reg.correction(default_correction_prompt(schema), schema);
        EXPECT_EQ(p.schema, schema);
    }
}

TEST(Prompts, RoleAndSchemaMismatchRejected) {
    const auto reg = PromptRegistry::load(LEMA_PROMPTS_DIR);
    EXPECT_THROW(reg.get(kDefaultReasoningPrompt, PromptRole::correction), ValidationError);
    EXPECT_THROW(reg.get("no_such_prompt", PromptRole::reasoning), ValidationError);
    EXPECT_THROW(reg.correction(default_correction_prompt(CorrectionSchema::full), CorrectionSchema::no_explanation),
                 ValidationError);
}

TEST(Prompts, RenderSubstitutesPlaceholders) {
    Prompt p{"t", PromptRole::correction, CorrectionSchema::full, "Q: {question}\nPath:\n{path}\n"};
    EXPECT_EQ(p.render("2+2?", "It is 5."), "Q: 2+2?\nPath:\nIt is 5.\n");
    Prompt few{"f", PromptRole::reasoning, std::nullopt, "Question: {question}\nAnswer:"};
    EXPECT_EQ(few.render("Why?"), "Question: Why?\nAnswer:");
}

TEST(Prompts, FewShotEndsWithTheQuestionSlot) {
    const auto reg = PromptRegistry::load(LEMA_PROMPTS_DIR);
    const std::string text = reg.get(kDefaultReasoningPrompt, PromptRole::reasoning).render("QQ");
    EXPECT_TRUE(text.ends_with("Question: QQ\nAnswer:\n"));
}

}  // namespace
}  // namespace lema
