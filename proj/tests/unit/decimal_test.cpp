// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/decimal.hpp"
#include "lema/rational.hpp"

namespace lema {
namespace {

std::string canon(std::string_view s) {
    auto d = Decimal::parse(s);
    return d ? d->str() : "<none>";
}

TEST(Decimal, CanonicalForms) {
    EXPECT_EQ(canon("1050.00"), "1050");
    EXPECT_EQ(canon("24."), "24");
    EXPECT_EQ(canon("-0.0"), "0");
    EXPECT_EQ(canon("+7"), "7");
    EXPECT_EQ(canon("0007.50"), "7.5");
    EXPECT_EQ(canon(".5"), "0.5");
    EXPECT_EQ(canon("1.5e3"), "1500");
    EXPECT_EQ(canon("25e-2"), "0.25");
}

TEST(Decimal, RejectsNonNumbers) {
    for (const char* bad : {"", "1,000", "inf", "nan", "1.2.3", "-", ".", "e5", "12a", " 1"}) {
        EXPECT_FALSE(Decimal::parse(bad).has_value()) << bad;
    }
}

TEST(Decimal, EqualityIsCanonical) {
    EXPECT_EQ(*Decimal::parse("3.10"), *Decimal::parse("3.1"));
    EXPECT_TRUE(Decimal::parse("-2")->negative());
    EXPECT_EQ(Decimal::parse("-2")->abs().str(), "2");
    EXPECT_TRUE(Decimal::parse("0.000")->is_zero());
}

TEST(Rational, ReducesAndRenders) {
    const Rational r(6, 8);
    EXPECT_EQ(r.num, 3);
    EXPECT_EQ(r.den, 4);
    EXPECT_EQ(render_percent(Rational(217, 2696)), "8.0");
    EXPECT_EQ(render_percent(Rational(1, 8), 2), "12.50");
    // Half-up: 1/16 = 6.25%.
    EXPECT_EQ(render_percent(Rational(1, 16), 1), "6.3");
    EXPECT_EQ(render_percent_compact(Rational(35, 50)), "70");
    EXPECT_EQ(render_percent_compact(Rational(9, 40)), "22.5");
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_EQ(Rational(3, 4) / 3, Rational(1, 4));
    EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
}

}  // namespace
}  // namespace lema
