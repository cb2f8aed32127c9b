// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace lema {

/// Exact decimal number kept as a digit string and a scale.
///
/// The canonical text form has no leading '+', no thousands separators, no
/// leading zeros in the integer part, and no trailing zeros after the point
/// ("1050", "-0.25", "0"). Two Decimals are equal iff their canonical forms
/// are equal.
class Decimal {
  public:
    Decimal() = default;

    /// Strict grammar: [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
    /// Returns nullopt for anything else (including "inf", "nan", "1,000").
    static std::optional<Decimal> parse(std::string_view text);

    /// Canonical text form.
    const std::string& str() const noexcept { return canonical_; }

    bool negative() const noexcept { return !canonical_.empty() && canonical_.front() == '-'; }
    bool is_zero() const noexcept { return canonical_ == "0"; }

    long double to_long_double() const;
    Decimal abs() const;

    friend bool operator==(const Decimal& a, const Decimal& b) { return a.canonical_ == b.canonical_; }

  private:
    explicit Decimal(std::string canonical) : canonical_(std::move(canonical)) {}

    std::string canonical_ = "0";
};

}  // namespace lema
