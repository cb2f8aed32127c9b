// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "lema/error.hpp"
#include "lema/gateway.hpp"
#include "test_util.hpp"

namespace lema {
namespace {

using test::Json;
using test::Mock;

TEST(Gateway, SamplesUpToN) {
    Mock mock(Json::array({test::rule("m", {}, {"one", "two", "three"})}));
    Gateway gw;
    SampleRequest req{"prompt", 2, 0.7, 16, std::nullopt};
    const auto r = gw.sample(mock.endpoint("m"), req);
    EXPECT_EQ(r.texts, (std::vector<std::string>{"one", "two"}));
    EXPECT_EQ(r.log.attempts, 1);
}

TEST(Gateway, SeedRotatesChoices) {
    Mock mock(Json::array({test::rule("m", {}, {"one", "two", "three"})}));
    Gateway gw;
    SampleRequest req{"prompt", 1, 0.7, 16, 4};
    EXPECT_EQ(gw.sample(mock.endpoint("m"), req).texts, std::vector<std::string>{"two"});
}

TEST(Gateway, ServerErrorsExhaustRetries) {
    Json r = test::rule("m", {}, {"x"});
    r["always_status"] = 500;
    Mock mock(Json::array({r}));
    Gateway gw;
    try {
        gw.sample(mock.endpoint("m"), {"p", 1, 0, 8, std::nullopt});
        FAIL() << "expected TransportError";
    } catch (const TransportError& e) {
        EXPECT_EQ(e.attempts(), 3);
        EXPECT_EQ(e.status(), 500);
    }
    EXPECT_EQ(mock.server().stats().requests, 3);
}

TEST(Gateway, RateLimitThenSuccess) {
    Json r = test::rule("m", {}, {"ok"});
    r["fail"] = {429, 429};
    Mock mock(Json::array({r}));
    Gateway gw;
    const auto res = gw.sample(mock.endpoint("m"), {"p", 1, 0, 8, std::nullopt});
    EXPECT_EQ(res.texts, std::vector<std::string>{"ok"});
    EXPECT_EQ(res.log.statuses, (std::vector<int>{429, 429, 200}));
    ASSERT_EQ(res.log.delays_ms.size(), 2u);
    EXPECT_LE(res.log.delays_ms[0], res.log.delays_ms[1]);
}

TEST(Gateway, AuthFailureIsNotRetried) {
    Json r = test::rule("m", {}, {"x"});
    r["always_status"] = 401;
    Mock mock(Json::array({r}));
    Gateway gw;
    EXPECT_THROW(gw.sample(mock.endpoint("m"), {"p", 1, 0, 8, std::nullopt}), AuthError);
    EXPECT_EQ(mock.server().stats().requests, 1);
}

TEST(Gateway, ClientErrorIsNotRetried) {
    Mock mock(Json::array({test::rule("other", {}, {"x"})}));
    Gateway gw;
    EXPECT_THROW(gw.sample(mock.endpoint("m"), {"p", 1, 0, 8, std::nullopt}), TransportError);
    EXPECT_EQ(mock.server().stats().requests, 1);
}

TEST(Gateway, UnreachableEndpoint) {
    EndpointSpec e;
    e.model_name = "m";
    e.base_url = "http://127.0.0.1:1/v1";
    e.timeout_s = 2;
    e.retry.max_attempts = 2;
    e.retry.base_backoff_ms = 1;
    Gateway gw;
    EXPECT_THROW(gw.sample(e, {"p", 1, 0, 8, std::nullopt}), TransportError);
}

TEST(Gateway, ConcurrencyCap) {
    Json r = test::rule("m", {}, {"x"});
    r["delay_ms"] = 20;
    Mock mock(Json::array({r}));
    Gateway gw;
    std::vector<SampleRequest> reqs(12, SampleRequest{"p", 1, 0, 8, std::nullopt});
    const auto out = gw.sample_all(mock.endpoint("m", 2), reqs);
    for (const auto& o : out) EXPECT_TRUE(o.ok());
    EXPECT_LE(mock.server().stats().max_in_flight, 2);
}

TEST(Gateway, BatchReportsFailuresPerRequest) {
    Mock mock(Json::array({test::rule("m", {"good"}, {"x"})}));
    Gateway gw;
    std::vector<SampleRequest> reqs{{"good", 1, 0, 8, std::nullopt}, {"bad", 1, 0, 8, std::nullopt}};
    const auto out = gw.sample_all(mock.endpoint("m"), reqs);
    EXPECT_TRUE(out[0].ok());
    EXPECT_FALSE(out[1].ok());
    EXPECT_EQ(out[1].status, 400);
}

TEST(Gateway, ScoreForcedPassesLogprobsThrough) {
    Json r = test::rule("m", {}, {"x"});
    r["token_logprobs"] = {-0.5, -1.5};
    Mock mock(Json::array({r}));
    Gateway gw;
    EXPECT_EQ(gw.score_forced(mock.endpoint("m"), "Q:", " ab"), (std::vector<double>{-0.5, -1.5}));
}

TEST(Gateway, ScoreForcedValidation) {
    Json r = test::rule("m", {}, {"x"});
    r["token_logprobs"] = {-0.5, 0.1};
    Mock mock(Json::array({r}));
    Gateway gw;
    EXPECT_THROW(gw.score_forced(mock.endpoint("m"), "Q:", ""), ValidationError);
    EXPECT_THROW(gw.score_forced(mock.endpoint("m"), "Q:", " ab"), ValidationError);
    auto no_scoring = mock.endpoint("m");
    no_scoring.capabilities.forced_logprobs = false;
    EXPECT_THROW(gw.score_forced(no_scoring, "Q:", " ab"), CapabilityError);
}

TEST(Gateway, AuditLogRecordsExchanges) {
    test::TempDir dir;
    Mock mock(Json::array({test::rule("m", {}, {"x"})}));
    {
        Gateway gw(GatewayOptions{dir / "audit.jsonl", nullptr});
        gw.sample(mock.endpoint("m"), {"p", 1, 0, 8, std::nullopt});
    }
    const std::string log = test::slurp(dir / "audit.jsonl");
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 1);
    EXPECT_NE(log.find("/v1/completions"), std::string::npos);
}

TEST(Gateway, BackoffIsMonotoneAndCapped) {
    RetryPolicy p;
    p.base_backoff_ms = 100;
    p.max_backoff_ms = 1000;
    int prev = 0;
    for (int k = 1; k <= 10; ++k) {
        const int d = backoff_delay_ms(p, k);
        EXPECT_GE(d, prev);
        EXPECT_LE(d, 1000);
        prev = d;
    }
    EXPECT_EQ(backoff_delay_ms(p, 1), 100);
}

TEST(Gateway, EndpointValidation) {
    EndpointSpec e;
    e.model_name = "m";
    e.base_url = "http://x";
    e.max_concurrency = 0;
    EXPECT_THROW(validate(e), ValidationError);
    e.max_concurrency = 1;
    e.retry.max_attempts = 0;
    EXPECT_THROW(validate(e), ValidationError);
}

}  // namespace
}  // namespace lema
