// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lema::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    /// Whether `in` is an interactive terminal (review needs one unless
    /// --grades-file is given).
    bool interactive = false;
};

/// Runs `lema-forge` with args (args[0] is the program name). Errors are
/// printed to err as one JSON line: {"error": {"kind": ..., "message": ...}}.
int run(const std::vector<std::string>& args, Streams io);

}  // namespace lema::cli
