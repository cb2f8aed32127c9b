// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Data-statistics tables: pool sizes per task, per-difficulty correction
// success, and human review aggregates.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/rational.hpp"
#include "lema/types.hpp"

namespace lema {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// RFC 4180 quoting where needed.
    std::string to_csv() const;
    /// Space-padded columns, numbers right-aligned.
    std::string to_text() const;
};

struct Pools {
    /// Questions the other pools refer to (training and evolved).
    const Corpus* corpus = nullptr;
    std::span<const ReasoningPath> cot;
    std::span<const Correction> corrections;
    std::span<const Question> test;
};

/// Columns: task, cot, corrections (kept), test. One row per task present
/// plus a "total" row. Records whose question is not in the corpus count
/// under "unknown".
Table corpus_stats(const Pools& pools);

struct LevelRow {
    std::string level;
    std::int64_t mistakes = 0;
    std::int64_t kept = 0;
    Rational rate;
};

/// Per difficulty level: collected wrong paths, kept corrections and
/// kept/mistakes. Levels without mistakes are omitted; questions without a
/// difficulty are grouped as "unknown" (last).
std::vector<LevelRow> difficulty_breakdown(std::span<const ReasoningPath> paths,
                                           std::span<const Correction> corrections, const Corpus& corpus);
Table to_table(std::span<const LevelRow> rows);

enum class Grade { excellent, good, poor };

std::string_view to_string(Grade g) noexcept;
std::optional<Grade> parse_grade(std::string_view text) noexcept;

struct ReviewSummary {
    std::int64_t excellent = 0;
    std::int64_t good = 0;
    std::int64_t poor = 0;

    std::int64_t total() const noexcept { return excellent + good + poor; }
    /// "70%/22%/8%" (excellent/good/poor); all zeros for an empty review.
    std::string proportions() const;
};

ReviewSummary review_summary(std::span<const Grade> grades);
Table to_table(const ReviewSummary& s);

}  // namespace lema
