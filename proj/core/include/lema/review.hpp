// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Human review of sampled corrections. Grades are appended to a JSONL file
// as they are entered, so an interrupted session resumes where it stopped.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lema/corpus.hpp"
#include "lema/stats.hpp"
#include "lema/types.hpp"

namespace lema {

struct ReviewSelection {
    /// Positions into the kept corrections, in review order.
    std::vector<std::size_t> order;
    /// Set when the sample size exceeded the pool.
    std::string note;
};

/// `n` kept corrections drawn without replacement; the whole pool (shuffled)
/// when n exceeds it.
ReviewSelection select_for_review(std::span<const Correction> kept, std::size_t n, std::uint64_t rng_seed);

struct GradeRecord {
    std::size_t position = 0;
    std::string question_id;
    std::string path_hash;
    Grade grade = Grade::poor;
    std::string note;
};

std::string encode(const GradeRecord& g);
GradeRecord decode_grade(std::string_view line);
/// Loads grades; a torn final line from an interrupted session is ignored.
std::vector<GradeRecord> load_grades(const std::filesystem::path& path);

struct GradeCommand {
    bool quit = false;
    std::optional<Grade> grade;
    std::string note;
};

/// "E", "G", "P" (or the full words, any case) with an optional note after
/// whitespace; "q" or "quit" ends the session. nullopt for anything else.
std::optional<GradeCommand> parse_grade_command(std::string_view line);

/// Text shown to the reviewer for one correction.
std::string render_review_item(const Question& q, const Correction& c, std::size_t position, std::size_t total);

struct ReviewSession {
    std::vector<GradeRecord> grades;
    bool complete = false;
};

/// Presents the selected corrections after those already graded in
/// `grades_path`, reading commands from `in` and appending each grade to the
/// file. Stops on quit or end of input.
ReviewSession run_review(std::span<const Correction> kept, const ReviewSelection& selection, const Corpus& corpus,
                         const std::filesystem::path& grades_path, std::istream& in, std::ostream& out);

}  // namespace lema
