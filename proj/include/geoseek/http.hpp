// Copyright 2026 The GeoSeek Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal HTTP abstraction shared by the remote embedder, the LLM
// conclusion extractor and the geocoder. Every remote client talks to an
// HttpTransport so tests can substitute a mock and count requests.

#ifndef GEOSEEK_HTTP_HPP
#define GEOSEEK_HTTP_HPP

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geoseek/clock.hpp"

namespace geoseek {

struct HttpRequest {
    std::string method = "GET";
    std::string url;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type = "application/json";
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Throws TransportError when no HTTP response was received.
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_http_transport(
    std::chrono::seconds timeout = std::chrono::seconds(30));

/// Exponential backoff: attempt k (0-based) waits base * factor^k.
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{250};
    double factor = 2.0;

    std::chrono::nanoseconds delay_before_retry(int failed_attempt) const;
};

std::string url_encode(std::string_view s);
std::string url_decode(std::string_view s);

/// Value of `key` in the URL's query string, url-decoded.
std::optional<std::string> query_param(std::string_view url, std::string_view key);

struct UrlParts {
    std::string origin;  // scheme://host[:port]
    std::string target;  // /path?query
};

UrlParts split_url(std::string_view url);

}  // namespace geoseek

#endif  // GEOSEEK_HTTP_HPP
