// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "lema/parallel.hpp"
#include "lema/rng.hpp"

namespace lema {
namespace {

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42), c(43);
    std::vector<std::uint64_t> xa, xb, xc;
    for (int i = 0; i < 8; ++i) {
        xa.push_back(a.next());
        xb.push_back(b.next());
        xc.push_back(c.next());
    }
    EXPECT_EQ(xa, xb);
    EXPECT_NE(xa, xc);
}

TEST(Rng, BelowStaysInRange) {
    Rng r(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto x = r.below(5);
        ASSERT_LT(x, 5u);
        seen.insert(x);
    }
    EXPECT_EQ(seen.size(), 5u);
}

TEST(Rng, ShuffleIsAPermutation) {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    Rng r(1);
    auto w = v;
    r.shuffle(w);
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}

TEST(Parallel, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsFirstError) {
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 4) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

}  // namespace
}  // namespace lema
