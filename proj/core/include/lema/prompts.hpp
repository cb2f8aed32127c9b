// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lema/types.hpp"

namespace lema {

enum class PromptRole { reasoning, correction, evolution, instruction };

std::string_view to_string(PromptRole role) noexcept;

/// A versioned prompt template. Placeholders: {question}, {path}.
struct Prompt {
    std::string id;
    PromptRole role = PromptRole::reasoning;
    /// Only correction prompts carry a schema.
    std::optional<CorrectionSchema> schema;
    std::string text;

    std::string render(std::string_view question, std::string_view path = {}) const;
};

/// Prompt assets addressed by id. A directory holds `registry.json`
///   {"prompts": {"<id>": {"file": "<id>.txt", "role": "correction", "schema": "full"}}}
/// next to the text files it names.
class PromptRegistry {
  public:
    static PromptRegistry load(const std::filesystem::path& dir);

    void add(Prompt prompt);

    /// Throws ValidationError when the id is unknown or has another role.
    const Prompt& get(std::string_view id, PromptRole role) const;
    /// Also checks that the correction prompt matches the schema.
    const Prompt& correction(std::string_view id, CorrectionSchema schema) const;

    bool contains(std::string_view id) const { return prompts_.contains(std::string(id)); }

  private:
    std::map<std::string, Prompt, std::less<>> prompts_;
};

/// Default prompt id for each correction schema.
std::string default_correction_prompt(CorrectionSchema schema);

inline constexpr std::string_view kDefaultReasoningPrompt = "cot_fewshot_v1";
inline constexpr std::string_view kDefaultEvolutionPrompt = "evolve_v1";
inline constexpr std::string_view kDefaultInstructionPrompt = "cot_instruction_v1";

}  // namespace lema
