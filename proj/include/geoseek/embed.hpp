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

// Text embedding providers and cosine similarity.

#ifndef GEOSEEK_EMBED_HPP
#define GEOSEEK_EMBED_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "geoseek/clock.hpp"
#include "geoseek/concurrency.hpp"
#include "geoseek/http.hpp"

namespace geoseek {

using EmbeddingVector = Eigen::VectorXd;

/// (a . b) / (|a| |b|), clamped to [-1, 1]. A zero vector on either side
/// yields 0 so that empty address levels degrade a reward instead of
/// aborting it. Throws std::invalid_argument on dimension mismatch, which
/// only happens when vectors from different providers are mixed.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    const Scalar na = a.norm();
    const Scalar nb = b.norm();
    if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
    return std::clamp<Scalar>(a.dot(b) / (na * nb), Scalar(-1), Scalar(1));
}

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// Same text, same vector (bitwise) for the lifetime of the provider.
    virtual EmbeddingVector embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::string provider_id() const = 0;
};

inline constexpr std::uint64_t kNgramHashSeed = 0x9E3779B97F4A7C15ULL;
inline constexpr std::size_t kDefaultNgramDimension = 512;

/// Character 3-gram hashing embedder.
///
/// The text is passed through text::normalize (NFC, case fold, trim,
/// whitespace collapse), wrapped in U+0002 / U+0003 boundary markers, and
/// every overlapping 3-code-point window is hashed with seeded FNV-1a
/// (64-bit, offset basis XOR seed, over the window's UTF-8 bytes) into
/// hash % dimension. Bucket counts are L2-normalized. Text that normalizes
/// to the empty string maps to the zero vector.
///
/// Boundary markers give one- and two-character names ("UK") a nonzero
/// embedding and weight word starts and ends.
EmbeddingVector ngram_embed(std::string_view text, std::size_t dimension,
                            std::uint64_t seed = kNgramHashSeed);

class NgramEmbedder final : public EmbeddingProvider {
public:
    /// Throws std::invalid_argument if dimension < 8.
    explicit NgramEmbedder(std::size_t dimension = kDefaultNgramDimension,
                           std::uint64_t seed = kNgramHashSeed);

    EmbeddingVector embed(std::string_view text) const override {
        return ngram_embed(text, dimension_, seed_);
    }
    std::size_t dimension() const override { return dimension_; }
    std::string provider_id() const override;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

/// Remote embedding service: POST {"texts": [...]} returning
/// {"vectors": [[...], ...]}. Vectors are memoized per text so repeated
/// calls stay bitwise identical even if the service is not.
class RemoteEmbedder final : public EmbeddingProvider {
public:
    struct Options {
        std::string url;
        std::string token;
        std::size_t max_in_flight = 4;
        RetryPolicy retry;
    };

    /// GEOSEEK_EMBED_URL / GEOSEEK_EMBED_TOKEN; nullopt when the URL is unset.
    static std::optional<Options> options_from_env();

    RemoteEmbedder(Options options, std::shared_ptr<HttpTransport> transport,
                   std::shared_ptr<Clock> clock = system_clock());

    EmbeddingVector embed(std::string_view text) const override;
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const;
    /// Probes the service once if no vector has been fetched yet.
    std::size_t dimension() const override;
    std::string provider_id() const override;

private:
    std::vector<EmbeddingVector> fetch(const std::vector<std::string>& texts) const;

    Options options_;
    std::shared_ptr<HttpTransport> transport_;
    std::shared_ptr<Clock> clock_;
    mutable ConcurrencyGate gate_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, EmbeddingVector> memo_;
    mutable std::size_t dimension_ = 0;
};

}  // namespace geoseek

#endif  // GEOSEEK_EMBED_HPP
