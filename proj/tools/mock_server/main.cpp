// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// lema-mock-server --script rules.json [--port N]

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "mock_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scripted completions server for offline pipeline runs"};
    std::string script_path;
    int port = 8000;
    int threads = 64;
    app.add_option("--script", script_path, "Rules file (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--port", port, "Port on 127.0.0.1 (0 picks a free one)")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        lema::mock::Server server(lema::mock::load_script(script_path), threads);
        server.start(port);
        std::cout << server.base_url() << std::endl;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "lema-mock-server: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
