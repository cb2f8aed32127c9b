// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/tokenizer.hpp"

#include <map>
#include <mutex>

#include "lema/error.hpp"

namespace lema {
namespace {

bool word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool space_byte(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class WsPunctTokenizer final : public Tokenizer {
  public:
    std::string_view id() const noexcept override { return kDefaultTokenizer; }

    std::int64_t count(std::string_view text) const override {
        std::int64_t n = 0;
        bool in_word = false;
        for (const char ch : text) {
            const auto c = static_cast<unsigned char>(ch);
            if (word_byte(c)) {
                if (!in_word) ++n;
                in_word = true;
            } else {
                in_word = false;
                if (!space_byte(c)) ++n;
            }
        }
        return n;
    }
};

class WhitespaceTokenizer final : public Tokenizer {
  public:
    std::string_view id() const noexcept override { return "ws-v1"; }

    std::int64_t count(std::string_view text) const override {
        std::int64_t n = 0;
        bool in_token = false;
        for (const char ch : text) {
            const bool space = space_byte(static_cast<unsigned char>(ch));
            if (!space && !in_token) ++n;
            in_token = !space;
        }
        return n;
    }
};

struct Registry {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const Tokenizer>, std::less<>> items;

    Registry() {
        for (std::shared_ptr<const Tokenizer> t :
             {std::shared_ptr<const Tokenizer>(std::make_shared<WsPunctTokenizer>()),
              std::shared_ptr<const Tokenizer>(std::make_shared<WhitespaceTokenizer>())}) {
            items.emplace(std::string(t->id()), t);
        }
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

const Tokenizer& get_tokenizer(std::string_view id) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.items.find(id);
    if (it == r.items.end()) throw ValidationError("unknown tokenizer '" + std::string(id) + "'");
    return *it->second;
}

void register_tokenizer(std::shared_ptr<const Tokenizer> tokenizer) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.items[std::string(tokenizer->id())] = std::move(tokenizer);
}

std::vector<std::string> registered_tokenizers() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> ids;
    for (const auto& [id, t] : r.items) ids.push_back(id);
    return ids;
}

std::int64_t count_tokens(std::span<DatasetRecord> records, std::string_view tokenizer_id) {
    const Tokenizer& tok = get_tokenizer(tokenizer_id);
    std::int64_t total = 0;
    for (auto& r : records) {
        r.token_count = tok.count(r.input) + tok.count(r.output);
        total += *r.token_count;
    }
    return total;
}

}  // namespace lema
