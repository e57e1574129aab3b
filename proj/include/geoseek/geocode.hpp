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

// Forward and reverse geocoding against an OpenCage-v1-shaped service, with
// an append-only on-disk cache, a sliding-window rate limiter and a
// fixture transport for offline runs.

#ifndef GEOSEEK_GEOCODE_HPP
#define GEOSEEK_GEOCODE_HPP

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "geoseek/address.hpp"
#include "geoseek/clock.hpp"
#include "geoseek/geo.hpp"
#include "geoseek/http.hpp"

namespace geoseek {

class GeocodeClient {
public:
    virtual ~GeocodeClient() = default;
    /// Throws std::invalid_argument for an empty address.
    virtual std::optional<GeoPoint> forward(std::string_view address) = 0;
    virtual std::optional<AddressHierarchy> reverse(const GeoPoint& point) = 0;
};

/// Append-only query -> response store.
///
/// On disk: UTF-8 text, one JSON object per LF-terminated line,
///   {"k": "<key>", "t": <unix seconds>, "v": "<raw response body>"}
/// Later lines for the same key win. A torn final line is ignored on load.
/// Keys are "fwd:" + text::normalize(address) or "rev:<lat>,<lon>" with
/// six fixed decimals.
class GeocodeCache {
public:
    struct Entry {
        std::string response;
        std::int64_t timestamp = 0;
    };

    /// In-memory only when `path` is empty. Throws DataError if the file
    /// exists but cannot be read.
    explicit GeocodeCache(std::optional<std::filesystem::path> path = std::nullopt,
                          std::shared_ptr<Clock> clock = system_clock());

    std::optional<Entry> get(const std::string& key) const;
    void put(const std::string& key, const std::string& response);

    std::size_t size() const;
    std::size_t count_with_prefix(std::string_view prefix) const;
    const std::optional<std::filesystem::path>& path() const { return path_; }

    static std::string forward_key(std::string_view address);
    static std::string reverse_key(const GeoPoint& point);

private:
    std::optional<std::filesystem::path> path_;
    std::shared_ptr<Clock> clock_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, Entry> entries_;
};

/// At most `rps` requests in any half-open window of max(1 s, 1/rps).
/// acquire() sleeps on the injected clock until a slot frees up.
class RateLimiter {
public:
    RateLimiter(double rps, std::shared_ptr<Clock> clock);

    void acquire();

    std::chrono::nanoseconds window() const { return window_; }
    std::size_t capacity() const { return capacity_; }

private:
    std::shared_ptr<Clock> clock_;
    std::chrono::nanoseconds window_;
    std::size_t capacity_;
    std::mutex mu_;
    std::deque<std::chrono::nanoseconds> sent_;
};

enum class GeocodeError { None, Offline, NetworkFailure, QuotaExceeded, BadResponse };

std::string_view to_string(GeocodeError e);

struct GeocodeStats {
    std::size_t requests = 0;     // HTTP requests actually sent
    std::size_t cache_hits = 0;
    std::size_t degraded = 0;     // lookups that failed for non-data reasons
    std::size_t quota_exceeded = 0;
};

/// Maps OpenCage result components to the three address levels:
///   country <- country
///   region  <- state | province | county          (first nonempty)
///   precise <- "road house_number" | neighbourhood | city | town | village
/// Returns nullopt when all three come out empty.
std::optional<AddressHierarchy> address_from_components(const nlohmann::json& components);

class OpenCageClient final : public GeocodeClient {
public:
    struct Options {
        std::string base_url = "https://api.opencagedata.com/geocode/v1/json";
        std::string key;
        double rps = 1.0;
        RetryPolicy retry;
    };

    /// GEOSEEK_GEOCODE_URL, GEOSEEK_GEOCODE_KEY, GEOSEEK_GEOCODE_RPS.
    static Options options_from_env();

    /// A null transport means offline: only cache hits resolve, misses are
    /// counted as degraded with GeocodeError::Offline.
    OpenCageClient(Options options, std::shared_ptr<HttpTransport> transport,
                   std::shared_ptr<GeocodeCache> cache, std::shared_ptr<Clock> clock = system_clock());

    std::optional<GeoPoint> forward(std::string_view address) override;
    std::optional<AddressHierarchy> reverse(const GeoPoint& point) override;

    GeocodeStats stats() const;
    GeocodeError last_error() const { return last_error_.load(); }
    GeocodeCache& cache() { return *cache_; }

private:
    std::optional<nlohmann::json> lookup(const std::string& cache_key, const std::string& query);

    Options options_;
    std::shared_ptr<HttpTransport> transport_;
    std::shared_ptr<GeocodeCache> cache_;
    std::shared_ptr<Clock> clock_;
    RateLimiter limiter_;
    std::atomic<std::size_t> requests_{0};
    std::atomic<std::size_t> cache_hits_{0};
    std::atomic<std::size_t> degraded_{0};
    std::atomic<std::size_t> quota_{0};
    std::atomic<GeocodeError> last_error_{GeocodeError::None};
};

/// Serves recorded provider responses from a directory. The directory
/// holds index.json:
///   {"forward": {"<normalized address>": "<file>"},
///    "reverse": {"<lat>,<lon>": "<file>"}}
/// and the referenced response files, returned byte-for-byte. Requests
/// without a fixture raise TransportError.
class FixtureTransport final : public HttpTransport {
public:
    explicit FixtureTransport(std::filesystem::path dir);

    HttpResponse send(const HttpRequest& request) override;
    std::size_t request_count() const { return count_.load(); }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> forward_;
    std::map<std::string, std::string> reverse_;
    std::atomic<std::size_t> count_{0};
};

}  // namespace geoseek

#endif  // GEOSEEK_GEOCODE_HPP
