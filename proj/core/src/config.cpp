// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/config.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "lema/error.hpp"

namespace lema {
namespace {

using detail::Json;

template <typename T>
void read(const Json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it != j.end() && !it->is_null()) out = it->get<T>();
}

EndpointSpec parse_endpoint(const std::string& name, const Json& j) {
    if (!j.is_object()) throw ValidationError("endpoint '" + name + "' must be an object");
    EndpointSpec e;
    e.name = name;
    read(j, "base_url", e.base_url);
    read(j, "model", e.model_name);
    read(j, "api_key_env", e.api_key_env);
    read(j, "max_concurrency", e.max_concurrency);
    read(j, "timeout_s", e.timeout_s);
    read(j, "requests_per_minute", e.requests_per_minute);
    if (auto it = j.find("api"); it != j.end()) {
        const auto api = it->get<std::string>();
        if (api == "completions") {
            e.api = WireApi::completions;
        } else if (api == "chat") {
            e.api = WireApi::chat;
        } else {
            throw ValidationError("endpoint '" + name + "': api must be \"completions\" or \"chat\"");
        }
    }
    if (auto it = j.find("retry"); it != j.end()) {
        read(*it, "max_attempts", e.retry.max_attempts);
        read(*it, "base_backoff_ms", e.retry.base_backoff_ms);
        read(*it, "max_backoff_ms", e.retry.max_backoff_ms);
    }
    if (auto it = j.find("capabilities"); it != j.end()) {
        read(*it, "sampling", e.capabilities.sampling);
        read(*it, "forced_logprobs", e.capabilities.forced_logprobs);
    }
    validate(e);
    return e;
}

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ValidationError("config defaults must be scalars");
}

}  // namespace

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    Config c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "endpoints") {
                for (const auto& [name, spec] : value.items()) c.endpoints.emplace(name, parse_endpoint(name, spec));
            } else if (key == "prompts_dir") {
                std::filesystem::path p = value.get<std::string>();
                c.prompts_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
            } else if (key == "defaults") {
                for (const auto& [command, flags] : value.items()) {
                    for (const auto& [flag, v] : flags.items()) c.defaults[command][flag] = scalar_text(v);
                }
            } else if (key != "v") {
                throw ValidationError("unknown config key '" + key + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

EndpointSpec resolve_endpoint(std::string_view ref, const Config& config) {
    if (auto it = config.endpoints.find(ref); it != config.endpoints.end()) return it->second;
    const auto at = ref.find('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == ref.size()) {
        throw UsageError("unknown endpoint '" + std::string(ref) + "' (use a config name or model@http://host:port)");
    }
    EndpointSpec e;
    e.model_name = std::string(ref.substr(0, at));
    e.base_url = std::string(ref.substr(at + 1));
    if (!e.base_url.starts_with("http://") && !e.base_url.starts_with("https://")) {
        throw UsageError("endpoint URL must start with http:// or https://: " + e.base_url);
    }
    e.capabilities.forced_logprobs = true;
    validate(e);
    return e;
}

}  // namespace lema
