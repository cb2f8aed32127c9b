// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Line-delimited corpus files. Every line is one JSON object carrying
// "v": 1 plus the record's fields; multi-line text is escaped by the JSON
// encoding, so one record is always exactly one line.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lema/types.hpp"

namespace lema {

inline constexpr int kSchemaVersion = 1;

std::string encode(const Question& q);
std::string encode(const ReasoningPath& p);
std::string encode(const Correction& c);
std::string encode(const DatasetRecord& r);

Question decode_question(std::string_view line);
ReasoningPath decode_path(std::string_view line);
Correction decode_correction(std::string_view line);
DatasetRecord decode_record(std::string_view line);

/// Loads and validates a question file, preserving file order. When
/// expected_task is set every record must carry that task.
std::vector<Question> load_corpus(const std::filesystem::path& path, std::optional<Task> expected_task = std::nullopt);

/// Writes dataset records, one per line. Returns the number written.
std::size_t write_corpus(std::span<const DatasetRecord> records, const std::filesystem::path& path);

std::vector<DatasetRecord> load_records(const std::filesystem::path& path);
std::vector<ReasoningPath> load_paths(const std::filesystem::path& path);
std::vector<Correction> load_corrections(const std::filesystem::path& path);

std::size_t write_questions(std::span<const Question> questions, const std::filesystem::path& path);
std::size_t write_paths(std::span<const ReasoningPath> paths, const std::filesystem::path& path);
std::size_t write_corrections(std::span<const Correction> corrections, const std::filesystem::path& path);

/// Writes raw lines (each already a complete record) with '\n' terminators.
std::size_t write_lines(std::span<const std::string> lines, const std::filesystem::path& path);
/// Reads non-empty lines; the callback receives (1-based line number, text).
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn);

/// Questions indexed by id.
class Corpus {
  public:
    Corpus() = default;
    /// Throws ValidationError naming the id on duplicates.
    explicit Corpus(std::vector<Question> questions);

    const Question* find(std::string_view id) const;
    /// Throws IntegrityError when absent.
    const Question& at(std::string_view id) const;

    const std::vector<Question>& questions() const noexcept { return questions_; }
    std::size_t size() const noexcept { return questions_.size(); }
    bool empty() const noexcept { return questions_.empty(); }

    /// Appends more questions (e.g. an evolved round); same duplicate rule.
    void extend(std::vector<Question> more);

  private:
    std::vector<Question> questions_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Referential integrity: every referenced question id exists.
void check_references(const Corpus& corpus, std::span<const ReasoningPath> paths);
void check_references(const Corpus& corpus, std::span<const Correction> corrections);
void check_references(const Corpus& corpus, std::span<const DatasetRecord> records);

/// Every evolved question's parent chain exists, is acyclic, and ends at an
/// original question.
void check_parent_links(const Corpus& corpus);

}  // namespace lema

#include "lema/detail/corpus_inl.hpp"
