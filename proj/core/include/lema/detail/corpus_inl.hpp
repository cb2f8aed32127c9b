// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>

#include "lema/error.hpp"

namespace lema {

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(number, std::string_view(line));
    }
}

}  // namespace lema
