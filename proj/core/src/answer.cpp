// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/answer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "lema/error.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

constexpr std::string_view kAnswerMarker = "the answer is";
constexpr std::string_view kHashMarker = "####";
constexpr std::string_view kBoxed = "\\boxed{";

constexpr std::array<std::string_view, 6> kCurrency{"$", "\xe2\x82\xac" /* € */, "\xc2\xa3" /* £ */,
                                                    "\xc2\xa5" /* ¥ */, "\xe2\x82\xb9" /* ₹ */, "USD"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool numeric_task(Task task) {
    return task == Task::GSM8K || task == Task::SVAMP || task == Task::ASDiv || task == Task::CUSTOM;
}

std::string_view strip_wrapping(std::string_view s) {
    constexpr std::string_view leading = ":\"'([*`";
    constexpr std::string_view trailing = ".,;:!?\"')]*`";
    s = trim(s);
    while (!s.empty() && leading.find(s.front()) != std::string_view::npos) s = trim(s.substr(1));
    while (!s.empty() && trailing.find(s.back()) != std::string_view::npos) s = trim(s.substr(0, s.size() - 1));
    return s;
}

/// Numeric value with optional currency prefix, thousands separators, and a
/// trailing unit phrase. Anything else after the number rejects the span.
std::optional<Decimal> parse_numeric_span(std::string_view raw) {
    std::string_view s = strip_wrapping(raw);
    std::string sign;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        sign = s.front() == '-' ? "-" : "";
        s = trim(s.substr(1));
    }
    for (auto symbol : kCurrency) {
        if (s.starts_with(symbol)) {
            s = trim(s.substr(symbol.size()));
            break;
        }
    }
    if (sign.empty() && !s.empty() && (s.front() == '-' || s.front() == '+')) {
        sign = s.front() == '-' ? "-" : "";
        s = trim(s.substr(1));
    }

    std::string number = sign;
    std::size_t i = 0;
    bool seen_digit = false;
    while (i < s.size()) {
        const char c = s[i];
        if (is_digit(c)) {
            number += c;
            seen_digit = true;
            ++i;
        } else if (c == ',' && seen_digit && i + 1 < s.size() && is_digit(s[i + 1])) {
            ++i;  // thousands separator
        } else {
            break;
        }
    }
    if (i < s.size() && s[i] == '.' && i + 1 < s.size() && is_digit(s[i + 1])) {
        number += '.';
        ++i;
        while (i < s.size() && is_digit(s[i])) number += s[i++];
    } else if (!seen_digit && i < s.size() && s[i] == '.') {
        return std::nullopt;
    }
    if (!seen_digit && number.find('.') == std::string::npos) return std::nullopt;

    std::string_view rest = trim(s.substr(i));
    if (!rest.empty() && rest.front() == '%') rest = trim(rest.substr(1));
    // Unit phrase: words only ("dollars", "apples per day").
    for (char c : rest) {
        if (!(is_alpha(c) || is_space(c) || c == '-' || c == '\'' || c == '.')) return std::nullopt;
    }
    if (!rest.empty() && !is_alpha(rest.front())) return std::nullopt;
    return Decimal::parse(number);
}

std::optional<AnswerValue> parse_choice_span(std::string_view raw) {
    std::string_view s = trim(raw);
    while (!s.empty() && (s.front() == ':' || s.front() == '*' || s.front() == '"')) s = trim(s.substr(1));
    bool paren = false;
    if (!s.empty() && s.front() == '(') {
        paren = true;
        s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
    if (letter < 'A' || letter > 'E') return std::nullopt;
    s.remove_prefix(1);
    if (paren) {
        if (s.empty() || s.front() != ')') return std::nullopt;
        s.remove_prefix(1);
    }
    // "B", "B.", "(b) dog" are fine; "Bob" is not a choice.
    if (!s.empty() && std::isalnum(static_cast<unsigned char>(s.front()))) return std::nullopt;
    return AnswerValue::choice(letter);
}

std::optional<std::string> boxed_content(std::string_view s, std::size_t open) {
    // `open` points at the '{' of \boxed{.
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '{') {
            ++depth;
        } else if (s[i] == '}') {
            if (--depth == 0) return std::string(s.substr(open + 1, i - open - 1));
        }
    }
    return std::nullopt;
}

/// Cuts a numeric-task span at the end of its sentence. A '.' followed by a
/// digit is a decimal point and does not end the sentence.
std::string_view sentence_span(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\n') return s.substr(0, i);
        if ((s[i] == '.' || s[i] == ';' || s[i] == '!' || s[i] == '?') && (i + 1 == s.size() || is_space(s[i + 1]))) {
            return s.substr(0, i);
        }
    }
    return s;
}

std::string_view line_span(std::string_view s) {
    auto nl = s.find('\n');
    return nl == std::string_view::npos ? s : s.substr(0, nl);
}

}  // namespace

std::string normalize_math_text(std::string_view raw) {
    std::string s(trim(raw));
    for (std::size_t pos; (pos = s.find(kBoxed)) != std::string::npos;) {
        auto inner = boxed_content(s, pos + kBoxed.size() - 1);
        if (!inner) break;
        const std::size_t end = pos + kBoxed.size() + inner->size() + 1;
        s = s.substr(0, pos) + *inner + s.substr(end);
    }
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '$') {
            ++i;
            continue;
        }
        if (s[i] == '$' || is_space(s[i])) continue;
        out += s[i];
    }
    while (!out.empty() && (out.back() == '.' || out.back() == ',')) out.pop_back();
    return out;
}

std::optional<AnswerValue> normalize(std::string_view raw, Task task) {
    if (task == Task::CSQA) return parse_choice_span(raw);
    if (task == Task::MATH) {
        std::string text = normalize_math_text(raw);
        if (text.empty()) return std::nullopt;
        std::string digits;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == ',' && i > 0 && is_digit(text[i - 1]) && i + 1 < text.size() && is_digit(text[i + 1])) continue;
            digits += text[i];
        }
        if (auto d = Decimal::parse(digits)) return AnswerValue::numeric(*d);
        return AnswerValue::text(std::move(text));
    }
    if (auto d = parse_numeric_span(raw)) return AnswerValue::numeric(*d);
    if (task == Task::CUSTOM) {
        std::string_view text = strip_wrapping(raw);
        if (!text.empty()) return AnswerValue::text(std::string(text));
    }
    return std::nullopt;
}

std::optional<AnswerValue> extract_answer(std::string_view text, Task task) {
    const std::size_t answer_pos = irfind(text, kAnswerMarker);
    const std::size_t hash_pos = text.rfind(kHashMarker);
    const std::size_t boxed_pos = task == Task::MATH ? text.rfind(kBoxed) : std::string_view::npos;

    std::size_t best = std::string_view::npos;
    std::size_t span_start = 0;
    auto consider = [&](std::size_t pos, std::size_t marker_len) {
        if (pos == std::string_view::npos) return;
        if (best == std::string_view::npos || pos > best) {
            best = pos;
            span_start = pos + marker_len;
        }
    };
    consider(answer_pos, kAnswerMarker.size());
    consider(hash_pos, kHashMarker.size());
    if (best == std::string_view::npos && boxed_pos == std::string_view::npos) return std::nullopt;

    if (boxed_pos != std::string_view::npos && (best == std::string_view::npos || boxed_pos > best)) {
        auto inner = boxed_content(text, boxed_pos + kBoxed.size() - 1);
        if (!inner) return std::nullopt;
        return normalize(*inner, task);
    }

    std::string_view rest = text.substr(span_start);
    // "#### 72" may repeat the hash marker; skip any extra '#'.
    while (!rest.empty() && rest.front() == '#') rest.remove_prefix(1);
    rest = trim(rest);
    if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
    const std::string_view span = numeric_task(task) ? sentence_span(rest) : line_span(rest);
    if (trim(span).empty()) return std::nullopt;
    return normalize(span, task);
}

bool answers_equal(const AnswerValue& a, const AnswerValue& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case AnswerKind::numeric: {
            if (a.as_numeric() == b.as_numeric()) return true;
            const long double x = a.as_numeric().to_long_double();
            const long double y = b.as_numeric().to_long_double();
            if (!std::isfinite(x) || !std::isfinite(y)) return false;
            const long double scale = std::max({1.0L, std::fabs(x), std::fabs(y)});
            return std::fabs(x - y) <= kNumericTolerance * scale;
        }
        case AnswerKind::choice: return a.as_choice() == b.as_choice();
        case AnswerKind::text: return a.as_text() == b.as_text();
    }
    return false;
}

bool is_numeric_gradable(const Question& q) { return q.gold_answer.kind() == AnswerKind::numeric; }

AnswerValue parse_gold(std::string_view raw, Task task) {
    if (task == Task::CSQA || task == Task::MATH) {
        auto v = normalize(raw, task);
        if (!v) throw ValidationError("cannot parse gold answer '" + std::string(raw) + "' for " + std::string(to_string(task)));
        return *v;
    }
    const std::string_view s = trim(raw);
    if (auto d = Decimal::parse(s)) return AnswerValue::numeric(*d);
    if (s.empty()) throw ValidationError("empty gold answer");
    return AnswerValue::text(std::string(s));
}

}  // namespace lema
