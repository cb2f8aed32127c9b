// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace lema {

/// Seeded generator with portable bounded draws.
///
/// std::mt19937_64's output sequence is fixed by the standard, but the
/// distributions and std::shuffle are not, so draws here are done by hand to
/// keep artifacts byte-identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Values below 2^64 mod bound are rejected to remove modulo bias.
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x = next();
        while (x < threshold) x = next();
        return x % bound;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// splitmix64 finalizer, also used to derive independent sub-seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace lema
