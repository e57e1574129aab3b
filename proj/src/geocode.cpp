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

#include "geoseek/geocode.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "geoseek/error.hpp"
#include "geoseek/text.hpp"

namespace geoseek {
namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string str_or_empty(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return {};
    const auto& v = j.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    return {};
}

std::string first_nonempty(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        std::string v = text::nfc_trim(str_or_empty(j, k));
        if (!v.empty()) return v;
    }
    return {};
}

std::string coord_key(double lat, double lon) { return fmt::format("{:.6f},{:.6f}", lat, lon); }

}  // namespace

// ---------------------------------------------------------------- cache

GeocodeCache::GeocodeCache(std::optional<std::filesystem::path> path, std::shared_ptr<Clock> clock)
    : path_(std::move(path)), clock_(std::move(clock)) {
    if (!path_ || !std::filesystem::exists(*path_)) return;
    std::ifstream in(*path_, std::ios::binary);
    if (!in) throw DataError("cannot read geocode cache " + path_->string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            entries_[j.at("k").get<std::string>()] =
                Entry{j.at("v").get<std::string>(), j.at("t").get<std::int64_t>()};
        } catch (const nlohmann::json::exception&) {
            if (in.peek() == std::char_traits<char>::eof()) {
                spdlog::warn("geocode cache {}: ignoring torn final line {}", path_->string(), lineno);
                break;
            }
            throw DataError(fmt::format("geocode cache {}: corrupt line {}", path_->string(), lineno));
        }
    }
}

std::optional<GeocodeCache::Entry> GeocodeCache::get(const std::string& key) const {
    std::shared_lock lock(mu_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void GeocodeCache::put(const std::string& key, const std::string& response) {
    std::unique_lock lock(mu_);
    const Entry e{response, clock_->unix_seconds()};
    if (path_) {
        if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
        std::ofstream out(*path_, std::ios::binary | std::ios::app);
        if (!out) throw DataError("cannot append to geocode cache " + path_->string());
        const nlohmann::json line = {{"k", key}, {"t", e.timestamp}, {"v", response}};
        out << line.dump() << '\n';
    }
    entries_[key] = e;
}

std::size_t GeocodeCache::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

std::size_t GeocodeCache::count_with_prefix(std::string_view prefix) const {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (const auto& [k, _] : entries_) {
        if (std::string_view(k).starts_with(prefix)) ++n;
    }
    return n;
}

std::string GeocodeCache::forward_key(std::string_view address) {
    return "fwd:" + text::normalize(address);
}

std::string GeocodeCache::reverse_key(const GeoPoint& point) {
    return "rev:" + coord_key(point.lat(), point.lon());
}

// --------------------------------------------------------- rate limiter

RateLimiter::RateLimiter(double rps, std::shared_ptr<Clock> clock) : clock_(std::move(clock)) {
    if (!(rps > 0.0) || !std::isfinite(rps)) throw std::invalid_argument("RateLimiter: rps must be > 0");
    const double window_s = std::max(1.0, 1.0 / rps);
    window_ = std::chrono::nanoseconds(static_cast<std::int64_t>(std::ceil(window_s * 1e9)));
    capacity_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(rps * window_s + 1e-9)));
}

void RateLimiter::acquire() {
    std::lock_guard lock(mu_);
    for (;;) {
        const auto now = clock_->now();
        while (!sent_.empty() && sent_.front() + window_ <= now) sent_.pop_front();
        if (sent_.size() < capacity_) {
            sent_.push_back(now);
            return;
        }
        clock_->sleep_for(sent_.front() + window_ - now);
    }
}

// -------------------------------------------------------------- client

std::string_view to_string(GeocodeError e) {
    switch (e) {
        case GeocodeError::None: return "none";
        case GeocodeError::Offline: return "offline";
        case GeocodeError::NetworkFailure: return "network-failure";
        case GeocodeError::QuotaExceeded: return "quota-exceeded";
        case GeocodeError::BadResponse: return "bad-response";
    }
    return "none";
}

std::optional<AddressHierarchy> address_from_components(const nlohmann::json& c) {
    if (!c.is_object()) return std::nullopt;
    const std::string country = first_nonempty(c, {"country"});
    const std::string region = first_nonempty(c, {"state", "province", "county"});
    std::string precise;
    const std::string road = text::nfc_trim(str_or_empty(c, "road"));
    if (!road.empty()) {
        const std::string house = text::nfc_trim(str_or_empty(c, "house_number"));
        precise = house.empty() ? road : road + " " + house;
    } else {
        precise = first_nonempty(c, {"neighbourhood", "city", "town", "village"});
    }
    if (country.empty() && region.empty() && precise.empty()) return std::nullopt;
    return AddressHierarchy(country, region, precise);
}

OpenCageClient::Options OpenCageClient::options_from_env() {
    Options o;
    if (const char* url = std::getenv("GEOSEEK_GEOCODE_URL"); url && *url) o.base_url = url;
    if (const char* key = std::getenv("GEOSEEK_GEOCODE_KEY")) o.key = key;
    if (const char* rps = std::getenv("GEOSEEK_GEOCODE_RPS"); rps && *rps) {
        try {
            o.rps = std::stod(rps);
        } catch (const std::exception&) {
            throw DataError(std::string("GEOSEEK_GEOCODE_RPS is not a number: ") + rps);
        }
    }
    return o;
}

OpenCageClient::OpenCageClient(Options options, std::shared_ptr<HttpTransport> transport,
                               std::shared_ptr<GeocodeCache> cache, std::shared_ptr<Clock> clock)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      cache_(cache ? std::move(cache) : std::make_shared<GeocodeCache>()),
      clock_(std::move(clock)),
      limiter_(options_.rps, clock_) {}

std::optional<nlohmann::json> OpenCageClient::lookup(const std::string& cache_key,
                                                     const std::string& query) {
    auto degrade = [&](GeocodeError e, const std::string& detail) -> std::optional<nlohmann::json> {
        degraded_.fetch_add(1);
        if (e == GeocodeError::QuotaExceeded) quota_.fetch_add(1);
        last_error_.store(e);
        spdlog::warn("geocode lookup '{}' degraded ({}): {}", query, to_string(e), detail);
        return std::nullopt;
    };

    if (auto hit = cache_->get(cache_key)) {
        cache_hits_.fetch_add(1);
        try {
            return nlohmann::json::parse(hit->response);
        } catch (const nlohmann::json::exception& e) {
            return degrade(GeocodeError::BadResponse, e.what());
        }
    }
    if (!transport_) return degrade(GeocodeError::Offline, "no geocoding transport configured");

    HttpRequest req;
    req.url = options_.base_url + "?q=" + url_encode(query) + "&limit=1&no_annotations=1";
    if (!options_.key.empty()) req.url += "&key=" + url_encode(options_.key);

    std::string last;
    for (int attempt = 0; attempt < options_.retry.max_attempts; ++attempt) {
        if (attempt > 0) clock_->sleep_for(options_.retry.delay_before_retry(attempt - 1));
        limiter_.acquire();
        requests_.fetch_add(1);
        HttpResponse resp;
        try {
            resp = transport_->send(req);
        } catch (const TransportError& e) {
            last = e.what();
            continue;
        }
        if (resp.status == 402 || resp.status == 429) {
            return degrade(GeocodeError::QuotaExceeded, fmt::format("HTTP {}", resp.status));
        }
        if (resp.status >= 500) {
            last = fmt::format("HTTP {}", resp.status);
            continue;
        }
        if (resp.status != 200) {
            return degrade(GeocodeError::BadResponse, fmt::format("HTTP {}", resp.status));
        }
        try {
            auto body = nlohmann::json::parse(resp.body);
            cache_->put(cache_key, resp.body);
            return body;
        } catch (const nlohmann::json::exception& e) {
            last = std::string("malformed response: ") + e.what();
        }
    }
    return degrade(GeocodeError::NetworkFailure, last);
}

std::optional<GeoPoint> OpenCageClient::forward(std::string_view address) {
    const std::string query = text::nfc_trim(address);
    if (query.empty()) throw std::invalid_argument("forward geocode: empty address");
    const auto body = lookup(GeocodeCache::forward_key(query), query);
    if (!body || !body->contains("results") || body->at("results").empty()) return std::nullopt;
    const auto& geometry = body->at("results").at(0).at("geometry");
    return GeoPoint::try_make(geometry.at("lat").get<double>(), geometry.at("lng").get<double>());
}

std::optional<AddressHierarchy> OpenCageClient::reverse(const GeoPoint& point) {
    const auto body =
        lookup(GeocodeCache::reverse_key(point), coord_key(point.lat(), point.lon()));
    if (!body || !body->contains("results") || body->at("results").empty()) return std::nullopt;
    const auto& result = body->at("results").at(0);
    if (!result.contains("components")) return std::nullopt;
    return address_from_components(result.at("components"));
}

GeocodeStats OpenCageClient::stats() const {
    return {requests_.load(), cache_hits_.load(), degraded_.load(), quota_.load()};
}

// ------------------------------------------------------------ fixtures

FixtureTransport::FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    const auto index_path = dir_ / "index.json";
    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_file(index_path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid fixture index " + index_path.string() + ": " + e.what());
    }
    if (index.contains("forward")) {
        for (const auto& [q, file] : index.at("forward").items()) {
            forward_[GeocodeCache::forward_key(q)] = file.get<std::string>();
        }
    }
    if (index.contains("reverse")) {
        static const std::regex kCoord(R"(^\s*(-?[0-9.]+)\s*,\s*(-?[0-9.]+)\s*$)");
        for (const auto& [q, file] : index.at("reverse").items()) {
            std::smatch m;
            if (!std::regex_match(q, m, kCoord)) throw DataError("bad reverse fixture key " + q);
            reverse_[coord_key(std::stod(m[1]), std::stod(m[2]))] = file.get<std::string>();
        }
    }
}

HttpResponse FixtureTransport::send(const HttpRequest& request) {
    count_.fetch_add(1);
    const auto q = query_param(request.url, "q");
    if (!q) throw TransportError("fixture transport: request without q parameter");

    static const std::regex kCoord(R"(^\s*(-?[0-9]+(?:\.[0-9]+)?)\s*,\s*(-?[0-9]+(?:\.[0-9]+)?)\s*$)");
    std::smatch m;
    const std::map<std::string, std::string>* table = &forward_;
    std::string key;
    if (std::regex_match(*q, m, kCoord)) {
        table = &reverse_;
        key = coord_key(std::stod(m[1]), std::stod(m[2]));
    } else {
        key = GeocodeCache::forward_key(*q);
    }
    const auto it = table->find(key);
    if (it == table->end()) throw TransportError("no fixture recorded for '" + *q + "'");
    return HttpResponse{200, read_file(dir_ / it->second)};
}

}  // namespace geoseek
