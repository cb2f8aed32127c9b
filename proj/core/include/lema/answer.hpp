// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Final-answer extraction and grading.
//
// Recognized markers are "The answer is" (any case) and the GSM8K "####"
// line marker. The last marker in the text wins; a text without any marker
// has no answer, and callers treat that as an unexpected format.

#pragma once

#include <optional>
#include <string_view>

#include "lema/types.hpp"

namespace lema {

/// Relative tolerance for numeric grading.
inline constexpr long double kNumericTolerance = 1e-6L;

std::optional<AnswerValue> extract_answer(std::string_view text, Task task);

/// Cleans a captured answer span: currency symbols, thousands separators,
/// unit words and surrounding punctuation are dropped; CSQA spans map to a
/// choice letter; MATH spans fall back to a normalized text answer. Number
/// words are not parsed.
std::optional<AnswerValue> normalize(std::string_view raw, Task task);

/// Grading equality. Numeric: exact match, else
/// |a-b| <= 1e-6 * max(1, |a|, |b|). Choice/text: identical. Cross-kind: false.
bool answers_equal(const AnswerValue& a, const AnswerValue& b);

/// True iff the gold answer is numeric (the ASDiv filter).
bool is_numeric_gradable(const Question& q);

/// Parses a gold answer given as a plain string. Numeric tasks use the strict
/// decimal grammar (anything else becomes a text answer); CSQA expects a
/// choice letter; MATH uses the MATH normalization.
AnswerValue parse_gold(std::string_view raw, Task task);

/// Strips \boxed{...}, '$', and whitespace from a MATH answer.
std::string normalize_math_text(std::string_view raw);

}  // namespace lema
