// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <unistd.h>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return lema::cli::run(args, {std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0});
}
