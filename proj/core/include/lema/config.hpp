// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Pipeline configuration file:
//
//   {
//     "endpoints": {
//       "reasoner": {"base_url": "http://127.0.0.1:8000/v1", "model": "llama-2-7b",
//                    "api_key_env": "", "max_concurrency": 8, "timeout_s": 120,
//                    "requests_per_minute": 0, "api": "completions",
//                    "retry": {"max_attempts": 3, "base_backoff_ms": 500, "max_backoff_ms": 30000},
//                    "capabilities": {"sampling": true, "forced_logprobs": false}}
//     },
//     "prompts_dir": "prompts",
//     "defaults": {"collect": {"samples-per-question": 4}}
//   }
//
// Relative paths are resolved against the config file's directory. Defaults
// are keyed by subcommand and long flag name; command-line flags win.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lema/gateway.hpp"

namespace lema {

struct Config {
    std::map<std::string, EndpointSpec, std::less<>> endpoints;
    std::optional<std::filesystem::path> prompts_dir;
    std::map<std::string, std::map<std::string, std::string>, std::less<>> defaults;
};

/// Throws ValidationError for malformed files and IoError when unreadable.
Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Resolves an endpoint reference: a name from the config, or an inline
/// "model@http://host:port[/v1]" (both capabilities assumed, other fields
/// default). Throws UsageError when neither applies.
EndpointSpec resolve_endpoint(std::string_view ref, const Config& config);

}  // namespace lema
