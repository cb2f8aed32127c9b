// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Token counting for dataset budgets. Counts only need to be deterministic
// and comparable between datasets; they are not a model's exact counts.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lema/types.hpp"

namespace lema {

class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual std::string_view id() const noexcept = 0;
    virtual std::int64_t count(std::string_view text) const = 0;
};

/// "ws-punct-v1": every maximal run of ASCII letters/digits (plus any byte
/// >= 0x80, so UTF-8 words stay whole) is one token, every other
/// non-whitespace character is its own token, whitespace is dropped.
/// "Let's go!" -> Let ' s go ! = 5 tokens.
inline constexpr std::string_view kDefaultTokenizer = "ws-punct-v1";

/// Throws ValidationError for an unregistered id.
const Tokenizer& get_tokenizer(std::string_view id);

/// Adds a tokenizer (e.g. a wrapper around a model tokenizer). Replaces any
/// tokenizer with the same id.
void register_tokenizer(std::shared_ptr<const Tokenizer> tokenizer);

std::vector<std::string> registered_tokenizers();

/// Sum of input+output tokens; stores each record's count in token_count.
std::int64_t count_tokens(std::span<DatasetRecord> records, std::string_view tokenizer_id);

}  // namespace lema
