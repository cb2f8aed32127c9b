// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lema {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool istarts_with(std::string_view s, std::string_view prefix) noexcept;

/// Case-insensitive search (ASCII). Returns npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0) noexcept;
/// Case-insensitive search for the last occurrence.
std::size_t irfind(std::string_view haystack, std::string_view needle) noexcept;

/// Collapses every whitespace run to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

std::uint64_t fnv1a64(std::string_view s) noexcept;

/// 16 lower-case hex digits of fnv1a64(normalize_whitespace(text)).
std::string path_hash(std::string_view text);

/// Replaces "{name}" placeholders in one left-to-right pass; substituted
/// values are never rescanned. Unknown placeholders are left untouched.
template <typename Lookup>
std::string substitute(std::string_view tmpl, Lookup&& lookup) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto name = tmpl.substr(i + 1, close - i - 1);
                if (const std::string* value = lookup(name)) {
                    out += *value;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

}  // namespace lema
