// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "mock_server.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace lema::mock {
namespace {

using Json = nlohmann::json;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

Json error_body(std::string_view message) { return Json{{"error", {{"message", message}, {"type", "mock"}}}}; }

}  // namespace

Script parse_script(std::string_view json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::exception& e) {
        throw std::runtime_error(std::string("mock script is not valid JSON: ") + e.what());
    }
    Script script;
    for (const auto& r : j.at("rules")) {
        Rule rule;
        if (r.contains("model")) rule.model = r.at("model").get<std::string>();
        if (r.contains("contains")) rule.contains = r.at("contains").get<std::vector<std::string>>();
        if (r.contains("texts")) rule.texts = r.at("texts").get<std::vector<std::string>>();
        if (r.contains("fail")) rule.fail = r.at("fail").get<std::vector<int>>();
        if (r.contains("always_status")) rule.always_status = r.at("always_status").get<int>();
        rule.delay_ms = r.value("delay_ms", 0);
        if (r.contains("token_logprobs")) rule.token_logprobs = r.at("token_logprobs").get<std::vector<double>>();
        rule.default_logprob = r.value("default_logprob", -1.0);
        script.rules.push_back(std::move(rule));
    }
    return script;
}

Script load_script(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read mock script " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_script(buffer.str());
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const bool space = is_space(text[i]);
        std::size_t j = i;
        while (j < text.size() && is_space(text[j]) == space) ++j;
        out.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

struct Server::Impl {
    Script script;
    int threads;
    httplib::Server http;
    std::thread worker;
    int port = 0;

    mutable std::mutex mutex;
    std::vector<std::size_t> failures_served;
    Stats stats;
    int in_flight = 0;

    Impl(Script s, int t) : script(std::move(s)), threads(t), failures_served(script.rules.size(), 0) {}

    const Rule* match(const std::string& model, const std::string& prompt, std::size_t& index) const {
        for (std::size_t i = 0; i < script.rules.size(); ++i) {
            const Rule& r = script.rules[i];
            if (r.model && *r.model != model) continue;
            if (std::all_of(r.contains.begin(), r.contains.end(),
                            [&](const std::string& s) { return prompt.find(s) != std::string::npos; })) {
                index = i;
                return &r;
            }
        }
        return nullptr;
    }

    void finish(httplib::Response& res, int status, const Json& body, const std::string& model) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
        std::lock_guard lock(mutex);
        --in_flight;
        ++stats.by_status[status];
        ++stats.by_model[model];
    }

    void handle(const httplib::Request& req, httplib::Response& res, bool chat) {
        {
            std::lock_guard lock(mutex);
            ++stats.requests;
            ++in_flight;
            stats.max_in_flight = std::max(stats.max_in_flight, in_flight);
        }
        Json body;
        try {
            body = Json::parse(req.body);
        } catch (const Json::exception&) {
            finish(res, 400, error_body("request body is not JSON"), "");
            return;
        }
        const std::string model = body.value("model", "");
        std::string prompt;
        if (chat) {
            for (const auto& m : body.value("messages", Json::array())) prompt += m.value("content", "");
        } else {
            prompt = body.value("prompt", "");
        }

        std::size_t index = 0;
        const Rule* rule = match(model, prompt, index);
        if (rule == nullptr) {
            finish(res, 400, error_body("no scripted response for this request"), model);
            return;
        }
        if (rule->delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(rule->delay_ms));
        if (rule->always_status) {
            finish(res, *rule->always_status, error_body("scripted failure"), model);
            return;
        }
        {
            std::unique_lock lock(mutex);
            if (failures_served[index] < rule->fail.size()) {
                const int status = rule->fail[failures_served[index]++];
                lock.unlock();
                finish(res, status, error_body("scripted failure"), model);
                return;
            }
        }

        Json out;
        out["id"] = "mock-" + std::to_string(index);
        out["object"] = chat ? "chat.completion" : "text_completion";
        out["model"] = model;
        Json choices = Json::array();
        if (!chat && body.value("echo", false)) {
            const auto tokens = split_tokens(prompt);
            Json logprobs{{"tokens", Json::array()}, {"token_logprobs", Json::array()}, {"text_offset", Json::array()}};
            std::size_t offset = 0;
            const std::size_t scripted_from =
                tokens.size() > rule->token_logprobs.size() ? tokens.size() - rule->token_logprobs.size() : 0;
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                logprobs["tokens"].push_back(tokens[i]);
                logprobs["text_offset"].push_back(offset);
                if (i == 0) {
                    logprobs["token_logprobs"].push_back(nullptr);
                } else if (i >= scripted_from) {
                    logprobs["token_logprobs"].push_back(rule->token_logprobs[i - scripted_from]);
                } else {
                    logprobs["token_logprobs"].push_back(rule->default_logprob);
                }
                offset += tokens[i].size();
            }
            choices.push_back({{"index", 0}, {"text", prompt}, {"logprobs", logprobs}, {"finish_reason", "length"}});
        } else if (!rule->texts.empty()) {
            const std::size_t n = static_cast<std::size_t>(std::max(1, body.value("n", 1)));
            const std::size_t count = std::min(n, rule->texts.size());
            const std::uint64_t seed = body.contains("seed") && body["seed"].is_number_unsigned()
                                           ? body["seed"].get<std::uint64_t>()
                                           : 0;
            const std::size_t start = static_cast<std::size_t>(seed % rule->texts.size());
            for (std::size_t i = 0; i < count; ++i) {
                const std::string& text = rule->texts[(start + i) % rule->texts.size()];
                Json choice{{"index", i}, {"finish_reason", "stop"}};
                if (chat) {
                    choice["message"] = {{"role", "assistant"}, {"content", text}};
                } else {
                    choice["text"] = text;
                }
                choices.push_back(std::move(choice));
            }
        }
        out["choices"] = std::move(choices);
        finish(res, 200, out, model);
    }
};

Server::Server(Script script, int threads) : impl_(std::make_unique<Impl>(std::move(script), threads)) {
    const int pool = threads;
    impl_->http.new_task_queue = [pool] { return new httplib::ThreadPool(static_cast<std::size_t>(pool)); };
    impl_->http.Post("/v1/completions",
                     [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res, false); });
    impl_->http.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res, true); });
    impl_->http.Get("/_stats", [this](const httplib::Request&, httplib::Response& res) {
        const Stats s = stats();
        Json j{{"requests", s.requests}, {"max_in_flight", s.max_in_flight}};
        for (const auto& [model, n] : s.by_model) j["by_model"][model] = n;
        for (const auto& [status, n] : s.by_status) j["by_status"][std::to_string(status)] = n;
        res.set_content(j.dump(), "application/json");
    });
    impl_->http.Post("/_reset", [this](const httplib::Request&, httplib::Response& res) {
        reset();
        res.set_content("{}", "application/json");
    });
}

Server::~Server() { stop(); }

int Server::start(int port) {
    if (port == 0) {
        impl_->port = impl_->http.bind_to_any_port("127.0.0.1");
    } else {
        if (!impl_->http.bind_to_port("127.0.0.1", port)) impl_->port = -1;
        else impl_->port = port;
    }
    if (impl_->port <= 0) throw std::runtime_error("mock server could not bind a port");
    impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
    return impl_->port;
}

void Server::stop() {
    if (impl_->worker.joinable()) {
        impl_->http.stop();
        impl_->worker.join();
    }
}

int Server::port() const noexcept { return impl_->port; }

std::string Server::base_url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1"; }

Stats Server::stats() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->stats;
}

void Server::reset() {
    std::lock_guard lock(impl_->mutex);
    impl_->stats = Stats{};
    std::fill(impl_->failures_served.begin(), impl_->failures_served.end(), 0);
}

}  // namespace lema::mock
