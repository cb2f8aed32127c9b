// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/config.hpp"
#include "lema/error.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

TEST(Config, ParsesEndpoints) {
    const auto c = parse_config(R"({
      "endpoints": {"r": {"base_url": "http://h:1/v1", "model": "m", "max_concurrency": 8,
                          "retry": {"max_attempts": 5}, "capabilities": {"forced_logprobs": true}, "api": "chat"}},
      "prompts_dir": "p",
      "defaults": {"collect": {"samples-per-question": 2}}
    })",
                                "/base");
    const auto& e = c.endpoints.at("r");
    EXPECT_EQ(e.name, "r");
    EXPECT_EQ(e.model_name, "m");
    EXPECT_EQ(e.max_concurrency, 8);
    EXPECT_EQ(e.retry.max_attempts, 5);
    EXPECT_TRUE(e.capabilities.forced_logprobs);
    EXPECT_EQ(e.api, WireApi::chat);
    EXPECT_EQ(*c.prompts_dir, std::filesystem::path("/base/p"));
    EXPECT_EQ(c.defaults.at("collect").at("samples-per-question"), "2");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_config(R"({"endpoint": {}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"endpoints": {"r": {"base_url": "http://h", "model": "m", "max_concurrency": 0}}})"),
                 ValidationError);
    EXPECT_THROW(parse_config("{"), ValidationError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Config, ResolveEndpoint) {
    const auto c = parse_config(R"({"endpoints": {"r": {"base_url": "http://h:1/v1", "model": "m"}}})");
    EXPECT_EQ(resolve_endpoint("r", c).model_name, "m");
    const auto inline_ref = resolve_endpoint("llama@http://127.0.0.1:9/v1", c);
    EXPECT_EQ(inline_ref.model_name, "llama");
    EXPECT_EQ(inline_ref.base_url, "http://127.0.0.1:9/v1");
    EXPECT_TRUE(inline_ref.capabilities.forced_logprobs);
    EXPECT_THROW(resolve_endpoint("nope", c), UsageError);
}

}  // namespace
}  // namespace lema
