// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/gateway.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "lema/error.hpp"
#include "lema/parallel.hpp"

namespace lema {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Gateway::EndpointState {
    std::mutex slot_mutex;
    std::condition_variable slot_cv;
    int in_flight = 0;
    int limit = 1;

    std::mutex bucket_mutex;
    double tokens = 0.0;
    bool primed = false;
    Clock::time_point refilled = Clock::now();

    void acquire() {
        std::unique_lock lock(slot_mutex);
        slot_cv.wait(lock, [&] { return in_flight < limit; });
        ++in_flight;
    }

    void release() {
        {
            std::lock_guard lock(slot_mutex);
            --in_flight;
        }
        slot_cv.notify_one();
    }

    /// Blocks until the token bucket has a request token. Capacity is one
    /// minute's worth of requests, starting full.
    void take_token(double per_minute) {
        if (per_minute <= 0.0) return;
        const double per_second = per_minute / 60.0;
        const double capacity = std::max(1.0, per_minute);
        for (;;) {
            std::chrono::duration<double> wait{};
            {
                std::lock_guard lock(bucket_mutex);
                const auto now = Clock::now();
                if (!primed) {
                    tokens = capacity;
                    primed = true;
                }
                tokens = std::min(capacity, tokens + std::chrono::duration<double>(now - refilled).count() * per_second);
                refilled = now;
                if (tokens >= 1.0) {
                    tokens -= 1.0;
                    return;
                }
                wait = std::chrono::duration<double>((1.0 - tokens) / per_second);
            }
            std::this_thread::sleep_for(wait);
        }
    }
};

namespace {

bool retryable(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

std::string describe(const EndpointSpec& endpoint, const HttpResponse& resp) {
    std::string what = endpoint.id() + " (" + endpoint.base_url + "): ";
    if (resp.status == 0) return what + "no response: " + resp.error;
    std::string body = resp.body.substr(0, 200);
    return what + "HTTP " + std::to_string(resp.status) + (body.empty() ? "" : ": " + body);
}

Json parse_body(const EndpointSpec& endpoint, const HttpResponse& resp, int attempts) {
    try {
        return Json::parse(resp.body);
    } catch (const Json::parse_error&) {
        throw TransportError(endpoint.id() + ": response is not JSON", resp.status, attempts);
    }
}

}  // namespace

void validate(const EndpointSpec& endpoint) {
    if (endpoint.model_name.empty()) throw ValidationError("endpoint without model_name");
    if (endpoint.base_url.empty()) throw ValidationError("endpoint " + endpoint.id() + " without base_url");
    if (endpoint.max_concurrency < 1) throw ValidationError("endpoint " + endpoint.id() + ": max_concurrency must be >= 1");
    if (endpoint.retry.max_attempts < 1) throw ValidationError("endpoint " + endpoint.id() + ": max_attempts must be >= 1");
    if (endpoint.retry.base_backoff_ms < 0) throw ValidationError("endpoint " + endpoint.id() + ": negative backoff");
    if (endpoint.timeout_s <= 0) throw ValidationError("endpoint " + endpoint.id() + ": timeout must be positive");
    if (endpoint.requests_per_minute < 0) throw ValidationError("endpoint " + endpoint.id() + ": negative rate limit");
}

void validate(const SampleRequest& request) {
    if (request.n < 1) throw ValidationError("sample request needs n >= 1");
    if (request.temperature < 0) throw ValidationError("sample request needs temperature >= 0");
    if (request.max_tokens < 1) throw ValidationError("sample request needs max_tokens >= 1");
}

int backoff_delay_ms(const RetryPolicy& policy, int retry) noexcept {
    long long delay = policy.base_backoff_ms;
    for (int i = 1; i < retry && delay < policy.max_backoff_ms; ++i) delay *= 2;
    return static_cast<int>(std::min<long long>(delay, policy.max_backoff_ms));
}

Gateway::Gateway(GatewayOptions options) : options_(std::move(options)) {
    if (!options_.transport) options_.transport = make_http_transport();
    if (options_.audit_log) {
        audit_stream_.open(*options_.audit_log, std::ios::binary | std::ios::app);
        if (!audit_stream_) throw IoError("cannot open audit log " + options_.audit_log->string());
    }
}

Gateway::~Gateway() = default;

Gateway::EndpointState& Gateway::state_for(const EndpointSpec& endpoint) {
    const std::string key = endpoint.id() + "|" + endpoint.base_url + "|" + endpoint.model_name;
    std::lock_guard lock(states_mutex_);
    auto& slot = states_[key];
    if (!slot) slot = std::make_unique<EndpointState>();
    {
        std::lock_guard slot_lock(slot->slot_mutex);
        slot->limit = endpoint.max_concurrency;
    }
    return *slot;
}

void Gateway::audit(const EndpointSpec& endpoint, const std::string& path, const std::string& body,
                    const HttpResponse& resp) {
    if (!audit_stream_.is_open()) return;
    Json line;
    line["endpoint"] = endpoint.id();
    line["path"] = path;
    line["request"] = Json::parse(body, nullptr, false);
    line["status"] = resp.status;
    line["response"] = resp.status == 0 ? resp.error : resp.body;
    const std::string text = line.dump(-1, ' ', false, Json::error_handler_t::replace);
    std::lock_guard lock(audit_mutex_);
    audit_stream_ << text << '\n';
    audit_stream_.flush();
}

HttpResponse Gateway::call_with_retry(const EndpointSpec& endpoint, const std::string& path, const std::string& body,
                                      AttemptLog& log) {
    validate(endpoint);
    std::string api_key;
    if (!endpoint.api_key_env.empty()) {
        const char* value = std::getenv(endpoint.api_key_env.c_str());
        if (value == nullptr || *value == '\0') {
            throw AuthError(endpoint.id() + ": environment variable " + endpoint.api_key_env + " is not set", 0, 0);
        }
        api_key = value;
    }

    EndpointState& state = state_for(endpoint);
    HttpResponse resp;
    for (int attempt = 1; attempt <= endpoint.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            const int delay = backoff_delay_ms(endpoint.retry, attempt - 1);
            log.delays_ms.push_back(delay);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        state.take_token(endpoint.requests_per_minute);
        state.acquire();
        try {
            resp = options_.transport->post_json(endpoint, path, body, api_key);
        } catch (...) {
            state.release();
            throw;
        }
        state.release();
        audit(endpoint, path, body, resp);
        ++log.attempts;
        log.statuses.push_back(resp.status);

        if (resp.status >= 200 && resp.status < 300) return resp;
        if (resp.status == 401 || resp.status == 403) {
            throw AuthError(describe(endpoint, resp), resp.status, log.attempts);
        }
        if (!retryable(resp.status)) throw TransportError(describe(endpoint, resp), resp.status, log.attempts);
    }
    throw TransportError(describe(endpoint, resp) + " (after " + std::to_string(log.attempts) + " attempts)",
                         resp.status, log.attempts);
}

SampleResult Gateway::sample(const EndpointSpec& endpoint, const SampleRequest& req) {
    validate(req);
    if (!endpoint.capabilities.sampling) throw CapabilityError(endpoint.id() + " does not support sampling");

    Json body;
    body["model"] = endpoint.model_name;
    std::string path;
    if (endpoint.api == WireApi::chat) {
        path = "/v1/chat/completions";
        body["messages"] = Json::array({Json{{"role", "user"}, {"content", req.prompt}}});
    } else {
        path = "/v1/completions";
        body["prompt"] = req.prompt;
    }
    body["n"] = req.n;
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_tokens;
    if (req.seed) body["seed"] = *req.seed;

    SampleResult result;
    const HttpResponse resp = call_with_retry(endpoint, path, body.dump(), result.log);
    const Json parsed = parse_body(endpoint, resp, result.log.attempts);

    auto choices = parsed.find("choices");
    if (choices == parsed.end() || !choices->is_array()) {
        throw TransportError(endpoint.id() + ": response has no choices array", resp.status, result.log.attempts);
    }
    std::vector<std::pair<long long, std::string>> indexed;
    long long position = 0;
    for (const auto& choice : *choices) {
        std::string text;
        if (auto msg = choice.find("message"); msg != choice.end() && msg->contains("content")) {
            text = (*msg)["content"].is_string() ? (*msg)["content"].get<std::string>() : std::string{};
        } else if (auto t = choice.find("text"); t != choice.end() && t->is_string()) {
            text = t->get<std::string>();
        }
        const long long index = choice.contains("index") && choice["index"].is_number_integer()
                                    ? choice["index"].get<long long>()
                                    : position;
        indexed.emplace_back(index, std::move(text));
        ++position;
    }
    std::stable_sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [index, text] : indexed) {
        if (static_cast<int>(result.texts.size()) >= req.n) break;
        result.texts.push_back(std::move(text));
    }
    return result;
}

std::vector<Outcome<SampleResult>> Gateway::sample_all(const EndpointSpec& endpoint,
                                                       std::span<const SampleRequest> requests) {
    validate(endpoint);
    std::vector<Outcome<SampleResult>> outcomes(requests.size());
    parallel_for(requests.size(), endpoint.max_concurrency, [&](std::size_t i) {
        auto& out = outcomes[i];
        try {
            out.value = sample(endpoint, requests[i]);
        } catch (const AuthError& e) {
            out.error = e.what();
            out.status = e.status();
            out.auth_failure = true;
        } catch (const TransportError& e) {
            out.error = e.what();
            out.status = e.status();
        }
    });
    return outcomes;
}

std::vector<double> Gateway::score_forced(const EndpointSpec& endpoint, std::string_view context,
                                          std::string_view continuation) {
    if (!endpoint.capabilities.forced_logprobs) {
        throw CapabilityError(endpoint.id() + " does not support forced log-probability scoring");
    }
    if (continuation.empty()) throw ValidationError("nothing to score: empty continuation");

    const std::string full = std::string(context) + std::string(continuation);
    Json body;
    body["model"] = endpoint.model_name;
    body["prompt"] = full;
    body["max_tokens"] = 1;
    body["temperature"] = 0;
    body["echo"] = true;
    body["logprobs"] = 1;

    AttemptLog log;
    const HttpResponse resp = call_with_retry(endpoint, "/v1/completions", body.dump(), log);
    const Json parsed = parse_body(endpoint, resp, log.attempts);

    const Json* logprobs = nullptr;
    if (auto choices = parsed.find("choices"); choices != parsed.end() && choices->is_array() && !choices->empty()) {
        if (auto lp = (*choices)[0].find("logprobs"); lp != (*choices)[0].end() && lp->is_object()) logprobs = &*lp;
    }
    if (logprobs == nullptr || !logprobs->contains("tokens") || !logprobs->contains("token_logprobs") ||
        !logprobs->contains("text_offset")) {
        throw ValidationError(endpoint.id() + ": response lacks echo logprobs (tokens/token_logprobs/text_offset)");
    }
    const auto& tokens = (*logprobs)["tokens"];
    const auto& values = (*logprobs)["token_logprobs"];
    const auto& offsets = (*logprobs)["text_offset"];
    if (tokens.size() != values.size() || tokens.size() != offsets.size()) {
        throw ValidationError(endpoint.id() + ": logprob arrays have different lengths");
    }

    const std::size_t begin = context.size();
    const std::size_t end = full.size();
    std::vector<double> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto offset = offsets[i].get<std::size_t>();
        const auto length = tokens[i].get<std::string>().size();
        if (offset >= end) break;  // generated tokens past the prompt
        if (offset < begin) {
            if (offset + length > begin) {
                throw ValidationError(endpoint.id() + ": token at offset " + std::to_string(offset) +
                                      " straddles the context/continuation boundary");
            }
            continue;
        }
        if (!values[i].is_number()) throw ValidationError(endpoint.id() + ": continuation token without logprob");
        const double lp = values[i].get<double>();
        if (lp > 0.0) throw ValidationError(endpoint.id() + ": log-probability " + std::to_string(lp) + " > 0");
        out.push_back(lp);
    }
    if (out.empty()) throw ValidationError(endpoint.id() + ": no continuation tokens scored");
    return out;
}

}  // namespace lema
