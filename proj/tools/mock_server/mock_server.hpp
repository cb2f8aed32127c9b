// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Scripted model server speaking the completions wire protocol. Used by the
// tests and the acceptance suite in place of real model endpoints.
//
// Script format:
//
//   {"rules": [
//     {"model": "reasoner-a",            // optional; any model when absent
//      "contains": ["(#0017)"],          // every substring must occur in the prompt
//      "texts": ["...", "..."],          // choices; rotated by request seed
//      "fail": [429, 429],               // statuses returned before the first success
//      "always_status": 500,             // optional; every request fails with it
//      "delay_ms": 0,
//      "token_logprobs": [-0.5, -1.5],   // echo scoring: values for the last tokens
//      "default_logprob": -1.0}          // echo scoring: every other token
//   ]}
//
// The first matching rule answers. A request matching no rule gets a 400.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lema::mock {

struct Rule {
    std::optional<std::string> model;
    std::vector<std::string> contains;
    std::vector<std::string> texts;
    std::vector<int> fail;
    std::optional<int> always_status;
    int delay_ms = 0;
    std::vector<double> token_logprobs;
    double default_logprob = -1.0;
};

struct Script {
    std::vector<Rule> rules;
};

/// Throws std::runtime_error on malformed scripts.
Script parse_script(std::string_view json_text);
Script load_script(const std::string& path);

/// Echo tokenization: maximal runs of non-whitespace and maximal runs of
/// whitespace are separate tokens.
std::vector<std::string> split_tokens(std::string_view text);

struct Stats {
    std::int64_t requests = 0;
    int max_in_flight = 0;
    std::map<std::string, std::int64_t> by_model;
    std::map<int, std::int64_t> by_status;
};

class Server {
  public:
    explicit Server(Script script, int threads = 64);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds 127.0.0.1 (port 0 picks a free port) and serves on a background
    /// thread. Returns the bound port.
    int start(int port = 0);
    void stop();

    int port() const noexcept;
    /// "http://127.0.0.1:<port>/v1"
    std::string base_url() const;

    Stats stats() const;
    /// Clears counters and per-rule failure progress.
    void reset();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lema::mock
