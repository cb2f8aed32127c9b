// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/rational.hpp"

#include <numeric>

#include "lema/error.hpp"

namespace lema {

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw ValidationError("rational with non-positive denominator");
    const auto g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

Rational operator+(const Rational& a, const Rational& b) {
    const auto l = std::lcm(a.den, b.den);
    return Rational(a.num * (l / a.den) + b.num * (l / b.den), l);
}

Rational operator/(const Rational& a, std::int64_t k) { return Rational(a.num, a.den * k); }

bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

std::string render_percent(const Rational& value, int decimals) {
    __int128 scale = 100;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    // Round half up on the exact fraction.
    const __int128 scaled = (static_cast<__int128>(value.num) * scale * 2 + value.den) / (static_cast<__int128>(value.den) * 2);
    __int128 divisor = 1;
    for (int i = 0; i < decimals; ++i) divisor *= 10;
    const auto whole = static_cast<long long>(scaled / divisor);
    std::string out = std::to_string(whole);
    if (decimals > 0) {
        std::string frac = std::to_string(static_cast<long long>(scaled % divisor));
        out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
    }
    return out;
}

std::string render_percent_compact(const Rational& value, int decimals) {
    std::string out = render_percent(value, decimals);
    if (auto dot = out.find('.'); dot != std::string::npos) {
        auto last = out.find_last_not_of('0');
        out.erase(last == dot ? dot : last + 1);
    }
    return out;
}

}  // namespace lema
