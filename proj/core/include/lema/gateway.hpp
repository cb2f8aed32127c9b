// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// The only component that talks to model endpoints. Requests use the
// completions/chat-completions HTTP schema (see docs/protocol.md).

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lema {

struct RetryPolicy {
    int max_attempts = 3;
    int base_backoff_ms = 500;
    int max_backoff_ms = 30'000;
};

struct Capabilities {
    bool sampling = true;
    bool forced_logprobs = false;
};

enum class WireApi { completions, chat };

struct EndpointSpec {
    /// Logical name used in configs and provenance; defaults to model_name.
    std::string name;
    std::string base_url;
    std::string model_name;
    /// Name of the environment variable holding the API key; empty = no auth.
    std::string api_key_env;
    int max_concurrency = 4;
    double timeout_s = 120.0;
    RetryPolicy retry;
    Capabilities capabilities;
    /// Token-bucket rate; 0 disables the limiter.
    double requests_per_minute = 0.0;
    WireApi api = WireApi::completions;

    const std::string& id() const noexcept { return name.empty() ? model_name : name; }
};

/// Throws ValidationError on max_concurrency < 1, max_attempts < 1, etc.
void validate(const EndpointSpec& endpoint);

struct SampleRequest {
    std::string prompt;
    int n = 1;
    double temperature = 0.0;
    int max_tokens = 512;
    std::optional<std::uint64_t> seed;
};

void validate(const SampleRequest& request);

struct AttemptLog {
    int attempts = 0;
    std::vector<int> statuses;
    /// Sleep before attempt k+1, for k = 1..attempts-1.
    std::vector<int> delays_ms;
};

struct SampleResult {
    std::vector<std::string> texts;
    AttemptLog log;
};

/// Outcome of one request inside a batch; exactly one of value/error is set.
template <typename T>
struct Outcome {
    std::optional<T> value;
    std::string error;
    int status = 0;
    bool auth_failure = false;

    bool ok() const noexcept { return value.has_value(); }
};

struct HttpResponse {
    /// 0 when no HTTP response was received (connect failure, timeout).
    int status = 0;
    std::string body;
    std::string error;
};

/// Pluggable HTTP layer; the default implementation uses cpp-httplib.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual HttpResponse post_json(const EndpointSpec& endpoint, const std::string& path, const std::string& body,
                                   const std::string& api_key) = 0;
};

std::shared_ptr<Transport> make_http_transport();

/// Backoff before retry number `retry` (1-based): base * 2^(retry-1), capped.
/// Non-decreasing in `retry`.
int backoff_delay_ms(const RetryPolicy& policy, int retry) noexcept;

struct GatewayOptions {
    /// When set, every request/response pair is appended here as JSON lines.
    std::optional<std::filesystem::path> audit_log;
    std::shared_ptr<Transport> transport;
};

class Gateway {
  public:
    explicit Gateway(GatewayOptions options = {});
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Up to req.n completions. Retries 429/5xx/timeouts with exponential
    /// backoff; throws AuthError on 401/403 and TransportError when retries
    /// are exhausted.
    SampleResult sample(const EndpointSpec& endpoint, const SampleRequest& req);

    /// Submits every request and waits for all of them. At most
    /// endpoint.max_concurrency requests are in flight for the endpoint.
    std::vector<Outcome<SampleResult>> sample_all(const EndpointSpec& endpoint, std::span<const SampleRequest> requests);

    /// Per-token log-probabilities of `continuation` given `context`.
    std::vector<double> score_forced(const EndpointSpec& endpoint, std::string_view context,
                                     std::string_view continuation);

  private:
    struct EndpointState;

    EndpointState& state_for(const EndpointSpec& endpoint);
    HttpResponse call_with_retry(const EndpointSpec& endpoint, const std::string& path, const std::string& body,
                                 AttemptLog& log);
    void audit(const EndpointSpec& endpoint, const std::string& path, const std::string& body, const HttpResponse& resp);

    GatewayOptions options_;
    std::mutex states_mutex_;
    std::map<std::string, std::unique_ptr<EndpointState>> states_;
    std::mutex audit_mutex_;
    std::ofstream audit_stream_;
};

}  // namespace lema
