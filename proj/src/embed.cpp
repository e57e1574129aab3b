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

#include "geoseek/embed.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "geoseek/error.hpp"
#include "geoseek/text.hpp"

namespace geoseek {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr char32_t kStartMarker = U'\u0002';
constexpr char32_t kEndMarker = U'\u0003';

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = kFnvOffset ^ seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

EmbeddingVector ngram_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
    if (dimension < 8) throw std::invalid_argument("ngram_embed: dimension must be >= 8");
    EmbeddingVector v = EmbeddingVector::Zero(static_cast<Eigen::Index>(dimension));
    const std::string norm = text::normalize(text);
    if (norm.empty()) return v;

    std::u32string cps;
    cps.push_back(kStartMarker);
    cps += text::to_codepoints(norm);
    cps.push_back(kEndMarker);

    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
        const std::string gram = text::from_codepoints(std::u32string_view(cps).substr(i, 3));
        v[static_cast<Eigen::Index>(fnv1a(gram, seed) % dimension)] += 1.0;
    }
    v.normalize();
    return v;
}

NgramEmbedder::NgramEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension < 8) throw std::invalid_argument("NgramEmbedder: dimension must be >= 8");
}

std::string NgramEmbedder::provider_id() const {
    return fmt::format("ngram3-d{}-s{:016x}", dimension_, seed_);
}

std::optional<RemoteEmbedder::Options> RemoteEmbedder::options_from_env() {
    const char* url = std::getenv("GEOSEEK_EMBED_URL");
    if (url == nullptr || *url == '\0') return std::nullopt;
    Options o;
    o.url = url;
    if (const char* token = std::getenv("GEOSEEK_EMBED_TOKEN")) o.token = token;
    return o;
}

RemoteEmbedder::RemoteEmbedder(Options options, std::shared_ptr<HttpTransport> transport,
                               std::shared_ptr<Clock> clock)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      gate_(options_.max_in_flight) {
    if (!transport_) throw std::invalid_argument("RemoteEmbedder: null transport");
}

std::vector<EmbeddingVector> RemoteEmbedder::fetch(const std::vector<std::string>& texts) const {
    HttpRequest req;
    req.method = "POST";
    req.url = options_.url;
    req.body = nlohmann::json{{"texts", texts}}.dump();
    if (!options_.token.empty()) req.headers.emplace_back("Authorization", "Bearer " + options_.token);

    std::string last_error;
    for (int attempt = 0; attempt < options_.retry.max_attempts; ++attempt) {
        if (attempt > 0) clock_->sleep_for(options_.retry.delay_before_retry(attempt - 1));
        try {
            HttpResponse resp;
            {
                auto permit = gate_.acquire();
                resp = transport_->send(req);
            }
            if (resp.status != 200) {
                last_error = fmt::format("HTTP {}", resp.status);
                continue;
            }
            const auto body = nlohmann::json::parse(resp.body);
            const auto& rows = body.at("vectors");
            if (!rows.is_array() || rows.size() != texts.size()) {
                last_error = "vector count does not match request";
                continue;
            }
            std::vector<EmbeddingVector> out;
            out.reserve(rows.size());
            for (const auto& row : rows) {
                const auto values = row.get<std::vector<double>>();
                EmbeddingVector v = Eigen::Map<const EmbeddingVector>(
                    values.data(), static_cast<Eigen::Index>(values.size()));
                if (!v.allFinite() || v.size() < 8) {
                    throw DataError("embedding service returned an invalid vector");
                }
                out.push_back(std::move(v));
            }
            return out;
        } catch (const TransportError& e) {
            last_error = e.what();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed reply: ") + e.what();
        }
        spdlog::warn("embedding request attempt {} failed: {}", attempt + 1, last_error);
    }
    throw TransportError("embedding service unavailable: " + last_error);
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) const {
    std::vector<std::string> missing;
    {
        std::lock_guard lock(mu_);
        for (const auto& t : texts) {
            if (!memo_.contains(t)) missing.push_back(t);
        }
    }
    if (!missing.empty()) {
        auto fetched = fetch(missing);
        std::lock_guard lock(mu_);
        for (std::size_t i = 0; i < missing.size(); ++i) {
            const auto dim = static_cast<std::size_t>(fetched[i].size());
            if (dimension_ == 0) dimension_ = dim;
            if (dim != dimension_) throw DataError("embedding service changed dimension");
            memo_.try_emplace(missing[i], std::move(fetched[i]));
        }
    }
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::lock_guard lock(mu_);
    for (const auto& t : texts) out.push_back(memo_.at(t));
    return out;
}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) const {
    return embed_batch({std::string(text)}).front();
}

std::size_t RemoteEmbedder::dimension() const {
    {
        std::lock_guard lock(mu_);
        if (dimension_ != 0) return dimension_;
    }
    return static_cast<std::size_t>(embed("dimension probe").size());
}

std::string RemoteEmbedder::provider_id() const { return "remote:" + options_.url; }

}  // namespace geoseek
