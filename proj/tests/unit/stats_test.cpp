// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/corpus.hpp"
#include "lema/stats.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

ReasoningPath wrong(std::string qid, int k) {
    ReasoningPath p;
    p.question_id = std::move(qid);
    p.generator = "r";
    p.text = "The answer is " + std::to_string(100 + k) + ".";
    p.extracted = test::num(std::to_string(100 + k));
    p.provenance = {"r"};
    return p;
}

Correction correction(std::string qid, CorrectionStatus s) {
    Correction c;
    c.question_id = std::move(qid);
    c.status = s;
    return c;
}

TEST(Stats, DifficultyBreakdownIsMonotone) {
    const Corpus corpus({test::question("easy", "e", "1", Task::MATH, 1), test::question("mid", "m", "1", Task::MATH, 3),
                         test::question("hard", "h", "1", Task::MATH, 5)});
    std::vector<ReasoningPath> paths;
    std::vector<Correction> cs;
    for (int i = 0; i < 10; ++i) {
        paths.push_back(wrong("easy", i));
        paths.push_back(wrong("hard", i));
        cs.push_back(correction("easy", i < 9 ? CorrectionStatus::kept : CorrectionStatus::wrong_answer));
        cs.push_back(correction("hard", i < 1 ? CorrectionStatus::kept : CorrectionStatus::parse_failed));
    }
    const auto rows = difficulty_breakdown(paths, cs, corpus);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].level, "Level 1");
    EXPECT_EQ(rows[0].rate, Rational(9, 10));
    EXPECT_EQ(rows[1].level, "Level 5");
    EXPECT_EQ(rows[1].rate, Rational(1, 10));
    EXPECT_GE(rows[0].rate.to_double(), rows[1].rate.to_double());

    const auto table = to_table(rows);
    EXPECT_EQ(table.rows.size(), 2u);
}

TEST(Stats, CorpusStatsPerTask) {
    const Corpus corpus({test::question("g1", "x", "1"), test::question("g2", "x", "1"),
                         test::question("s1", "x", "1", Task::SVAMP)});
    ReasoningPath p;
    p.question_id = "g1";
    const std::vector<ReasoningPath> cot{p, p};
    const std::vector<Correction> cs{correction("s1", CorrectionStatus::kept),
                                     correction("s1", CorrectionStatus::wrong_answer)};
    const std::vector<Question> test_set{test::question("t1", "x", "1", Task::SVAMP)};
    const auto t = corpus_stats({&corpus, cot, cs, test_set});
    EXPECT_EQ(t.header, (std::vector<std::string>{"task", "cot", "corrections", "test"}));
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0], (std::vector<std::string>{"GSM8K", "2", "0", "0"}));
    EXPECT_EQ(t.rows[1], (std::vector<std::string>{"SVAMP", "0", "1", "1"}));
    EXPECT_EQ(t.rows[2], (std::vector<std::string>{"total", "2", "1", "1"}));
}

TEST(Stats, ReviewSummary) {
    std::vector<Grade> g;
    g.insert(g.end(), 35, Grade::excellent);
    g.insert(g.end(), 11, Grade::good);
    g.insert(g.end(), 4, Grade::poor);
    const auto s = review_summary(g);
    EXPECT_EQ(s.total(), 50);
    EXPECT_EQ(s.proportions(), "70%/22%/8%");
    EXPECT_EQ(review_summary({}).proportions(), "0%/0%/0%");
    EXPECT_EQ(parse_grade("Excellent"), Grade::excellent);
    EXPECT_FALSE(parse_grade("great").has_value());
}

TEST(Stats, TableRendering) {
    Table t{{"name", "n"}, {{"a,b", "3"}, {"say \"hi\"", "12"}}};
    EXPECT_EQ(t.to_csv(), "name,n\n\"a,b\",3\n\"say \"\"hi\"\"\",12\n");
    EXPECT_EQ(t.to_text(), "name      n\na,b        3\nsay \"hi\"  12\n");
}

}  // namespace
}  // namespace lema
