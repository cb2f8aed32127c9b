// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/decimal.hpp"

#include <cctype>
#include <cstdlib>

namespace lema {
namespace {

constexpr long kMaxExponent = 1000;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    std::size_t int_count = 0;
    while (i < text.size() && is_digit(text[i])) {
        digits += text[i++];
        ++int_count;
    }
    long frac_count = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && is_digit(text[i])) {
            digits += text[i++];
            ++frac_count;
        }
    }
    if (digits.empty()) return std::nullopt;
    (void)int_count;

    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        if (i >= text.size() || !is_digit(text[i])) return std::nullopt;
        while (i < text.size() && is_digit(text[i])) {
            exponent = exponent * 10 + (text[i++] - '0');
            if (exponent > kMaxExponent) return std::nullopt;
        }
        if (exp_negative) exponent = -exponent;
    }
    if (i != text.size()) return std::nullopt;

    long scale = frac_count - exponent;
    if (scale < 0) {
        digits.append(static_cast<std::size_t>(-scale), '0');
        scale = 0;
    }
    // Integer part = digits[0, n - scale), fraction = the rest.
    const auto n = static_cast<long>(digits.size());
    std::string int_part;
    std::string frac_part;
    if (scale >= n) {
        int_part = "0";
        frac_part = std::string(static_cast<std::size_t>(scale - n), '0') + digits;
    } else {
        int_part = digits.substr(0, static_cast<std::size_t>(n - scale));
        frac_part = digits.substr(static_cast<std::size_t>(n - scale));
    }
    auto first = int_part.find_first_not_of('0');
    int_part = first == std::string::npos ? "0" : int_part.substr(first);
    auto last = frac_part.find_last_not_of('0');
    frac_part = last == std::string::npos ? "" : frac_part.substr(0, last + 1);

    std::string canonical = int_part;
    if (!frac_part.empty()) canonical += "." + frac_part;
    if (negative && canonical != "0") canonical.insert(canonical.begin(), '-');
    return Decimal(std::move(canonical));
}

long double Decimal::to_long_double() const { return std::strtold(canonical_.c_str(), nullptr); }

Decimal Decimal::abs() const { return negative() ? Decimal(canonical_.substr(1)) : *this; }

}  // namespace lema
