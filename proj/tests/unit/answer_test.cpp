// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/answer.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

using test::num;

std::string extracted(std::string_view text, Task task = Task::GSM8K) {
    auto a = extract_answer(text, task);
    return a ? a->render() : "<absent>";
}

TEST(Answer, LastMarkerWins) {
    EXPECT_EQ(extracted("The answer is 3. Wait, recheck: The answer is 5"), "5");
    EXPECT_EQ(extracted("Work.\n#### 42"), "42");
    EXPECT_EQ(extracted("the ANSWER is 7 apples."), "7");
}

TEST(Answer, NoMarkerIsAbsent) {
    EXPECT_EQ(extracted("So there are 12 eggs."), "<absent>");
    EXPECT_EQ(extracted("The answer is twelve."), "<absent>");
}

TEST(Answer, ChoiceExtraction) {
    EXPECT_EQ(extracted("Birds fly. The answer is (B).", Task::CSQA), "B");
    EXPECT_EQ(extracted("The answer is e", Task::CSQA), "E");
}

TEST(Answer, MathBoxed) { EXPECT_EQ(extracted("So x = 1/2. The answer is $\\boxed{\\frac{1}{2}}$.", Task::MATH), "\\frac{1}{2}"); }

TEST(Answer, Normalize) {
    EXPECT_EQ(normalize("$1,050.00", Task::GSM8K)->render(), "1050");
    EXPECT_EQ(normalize("24.", Task::GSM8K)->render(), "24");
    EXPECT_EQ(normalize("18 dollars", Task::GSM8K)->render(), "18");
    EXPECT_FALSE(normalize("twelve", Task::GSM8K).has_value());
    EXPECT_FALSE(normalize("", Task::GSM8K).has_value());
}

TEST(Answer, EqualityTolerance) {
    EXPECT_TRUE(answers_equal(num("0.3333333"), num("0.333333")));
    EXPECT_FALSE(answers_equal(num("0.33"), num("0.333333")));
    EXPECT_TRUE(answers_equal(num("1000000"), num("1000000.5")));
    EXPECT_FALSE(answers_equal(num("5"), AnswerValue::choice('B')));
    EXPECT_TRUE(answers_equal(AnswerValue::choice('B'), AnswerValue::choice('B')));
}

TEST(Answer, NumericGradability) {
    EXPECT_FALSE(is_numeric_gradable(test::question("a", "q", "Mrs. Hilt", Task::ASDiv)));
    EXPECT_FALSE(is_numeric_gradable(test::question("b", "q", "False", Task::ASDiv)));
    EXPECT_TRUE(is_numeric_gradable(test::question("c", "q", "17.5", Task::ASDiv)));
}

}  // namespace
}  // namespace lema
