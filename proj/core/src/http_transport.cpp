// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "httplib.h"
#include "lema/error.hpp"
#include "lema/gateway.hpp"

namespace lema {
namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing '/'
};

SplitUrl split_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("base_url needs a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = base_url.substr(0, path_start);
    if (path_start != std::string::npos) out.prefix = base_url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

class HttpTransport final : public Transport {
  public:
    HttpResponse post_json(const EndpointSpec& endpoint, const std::string& path, const std::string& body,
                           const std::string& api_key) override {
        const SplitUrl url = split_url(endpoint.base_url);
        std::string full_path = path;
        // A base_url that already ends in /v1 owns the version segment.
        if (url.prefix.ends_with("/v1") && full_path.starts_with("/v1/")) {
            full_path = url.prefix + full_path.substr(3);
        } else {
            full_path = url.prefix + full_path;
        }

        httplib::Client client(url.origin);
        const auto timeout = std::chrono::milliseconds(static_cast<long long>(endpoint.timeout_s * 1000.0));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        httplib::Headers headers;
        if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

        auto result = client.Post(full_path, headers, body, "application/json");
        HttpResponse response;
        if (!result) {
            response.error = httplib::to_string(result.error());
            return response;
        }
        response.status = result->status;
        response.body = result->body;
        return response;
    }
};

}  // namespace

std::shared_ptr<Transport> make_http_transport() { return std::make_shared<HttpTransport>(); }

}  // namespace lema
