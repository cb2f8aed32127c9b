// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/prompts.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lema/error.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

std::optional<PromptRole> parse_role(std::string_view s) {
    if (s == "reasoning") return PromptRole::reasoning;
    if (s == "correction") return PromptRole::correction;
    if (s == "evolution") return PromptRole::evolution;
    if (s == "instruction") return PromptRole::instruction;
    return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view to_string(PromptRole role) noexcept {
    switch (role) {
        case PromptRole::reasoning: return "reasoning";
        case PromptRole::correction: return "correction";
        case PromptRole::evolution: return "evolution";
        case PromptRole::instruction: return "instruction";
    }
    return "reasoning";
}

std::string Prompt::render(std::string_view question, std::string_view path) const {
    const std::string q(question);
    const std::string p(path);
    return substitute(text, [&](std::string_view name) -> const std::string* {
        if (name == "question") return &q;
        if (name == "path") return &p;
        return nullptr;
    });
}

PromptRegistry PromptRegistry::load(const std::filesystem::path& dir) {
    const auto index_path = dir / "registry.json";
    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_file(index_path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(index_path.string() + ": " + e.what());
    }
    PromptRegistry registry;
    for (const auto& [id, entry] : index.at("prompts").items()) {
        Prompt prompt;
        prompt.id = id;
        const auto role_name = entry.at("role").get<std::string>();
        auto role = parse_role(role_name);
        if (!role) throw ValidationError("prompt " + id + " has unknown role " + role_name);
        prompt.role = *role;
        if (auto it = entry.find("schema"); it != entry.end()) {
            auto schema = parse_schema(it->get<std::string>());
            if (!schema) throw ValidationError("prompt " + id + " has unknown schema");
            prompt.schema = schema;
        }
        prompt.text = read_file(dir / entry.at("file").get<std::string>());
        registry.add(std::move(prompt));
    }
    return registry;
}

void PromptRegistry::add(Prompt prompt) {
    if (prompt.text.find("{question}") == std::string::npos) {
        throw ValidationError("prompt " + prompt.id + " has no {question} placeholder");
    }
    if (prompt.role == PromptRole::correction) {
        if (!prompt.schema) prompt.schema = CorrectionSchema::full;
        if (prompt.text.find("{path}") == std::string::npos) {
            throw ValidationError("correction prompt " + prompt.id + " has no {path} placeholder");
        }
    }
    auto id = prompt.id;
    prompts_.insert_or_assign(std::move(id), std::move(prompt));
}

const Prompt& PromptRegistry::get(std::string_view id, PromptRole role) const {
    auto it = prompts_.find(id);
    if (it == prompts_.end()) throw ValidationError("unknown prompt id " + std::string(id));
    if (it->second.role != role) {
        throw ValidationError("prompt " + std::string(id) + " is a " + std::string(to_string(it->second.role)) +
                              " prompt, expected " + std::string(to_string(role)));
    }
    return it->second;
}

const Prompt& PromptRegistry::correction(std::string_view id, CorrectionSchema schema) const {
    const Prompt& p = get(id, PromptRole::correction);
    if (p.schema != schema) {
        throw ValidationError("correction prompt " + std::string(id) + " is for schema " +
                              std::string(to_string(*p.schema)) + ", requested " + std::string(to_string(schema)));
    }
    return p;
}

std::string default_correction_prompt(CorrectionSchema schema) {
    return "correction_" + std::string(to_string(schema)) + "_v1";
}

}  // namespace lema
