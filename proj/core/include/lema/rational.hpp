// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace lema {

/// Non-negative exact fraction used for rates and accuracies.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    /// Reduces to lowest terms. den must be > 0.
    Rational(std::int64_t n, std::int64_t d);

    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, std::int64_t k);
    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b) noexcept;
};

/// value * 100 rounded half-up to `decimals` places, e.g. 217/2696 -> "8.0".
std::string render_percent(const Rational& value, int decimals = 1);

/// Same as render_percent but drops a trailing ".0..." ("70", "22.5").
std::string render_percent_compact(const Rational& value, int decimals = 1);

}  // namespace lema
