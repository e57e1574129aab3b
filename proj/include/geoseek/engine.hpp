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

#ifndef GEOSEEK_ENGINE_HPP
#define GEOSEEK_ENGINE_HPP

#include <atomic>
#include <memory>
#include <span>
#include <vector>

#include "geoseek/dataset.hpp"
#include "geoseek/embed.hpp"
#include "geoseek/extract.hpp"
#include "geoseek/geocode.hpp"
#include "geoseek/rewards.hpp"

namespace geoseek {

/// Scores one GRPO group of replies against a ground-truth record.
///
/// Length penalties need every reply's reasoning length, so they are
/// computed for the whole group first; the per-reply terms then run on up
/// to `jobs` threads. Replies without coordinates are forward-geocoded
/// through `resolver` when one is given, otherwise they score R_spa = 0.
class RewardEngine {
public:
    RewardEngine(RewardConfig cfg, std::shared_ptr<const EmbeddingProvider> provider,
                 std::shared_ptr<const ConclusionExtractor> extractor,
                 std::shared_ptr<GeocodeClient> resolver = nullptr, std::size_t jobs = 1);

    std::vector<RewardBreakdown> score_group(std::span<const CandidateResponse> group,
                                             const LocationRecord& truth) const;

    const RewardConfig& config() const { return cfg_; }
    /// Extractions that fell back to offline rules.
    std::size_t degraded_extractions() const { return degraded_.load(); }
    std::size_t unresolved_predictions() const { return unresolved_.load(); }

private:
    RewardConfig cfg_;
    std::shared_ptr<const EmbeddingProvider> provider_;
    std::shared_ptr<const ConclusionExtractor> extractor_;
    std::shared_ptr<GeocodeClient> resolver_;
    std::size_t jobs_;
    mutable std::atomic<std::size_t> degraded_{0};
    mutable std::atomic<std::size_t> unresolved_{0};
};

}  // namespace geoseek

#endif  // GEOSEEK_ENGINE_HPP
