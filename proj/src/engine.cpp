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

#include "geoseek/engine.hpp"

#include "geoseek/concurrency.hpp"

namespace geoseek {

RewardEngine::RewardEngine(RewardConfig cfg, std::shared_ptr<const EmbeddingProvider> provider,
                           std::shared_ptr<const ConclusionExtractor> extractor,
                           std::shared_ptr<GeocodeClient> resolver, std::size_t jobs)
    : cfg_(std::move(cfg)),
      provider_(std::move(provider)),
      extractor_(std::move(extractor)),
      resolver_(std::move(resolver)),
      jobs_(jobs) {
    cfg_.validate();
    if (!provider_ || !extractor_) {
        throw std::invalid_argument("RewardEngine needs an embedding provider and an extractor");
    }
}

std::vector<RewardBreakdown> RewardEngine::score_group(std::span<const CandidateResponse> group,
                                                       const LocationRecord& truth) const {
    std::vector<ReasoningTrace> traces;
    traces.reserve(group.size());
    for (const auto& c : group) traces.push_back(c.reasoning);
    const Eigen::MatrixXd penalties = length_penalties(reasoning_lengths(traces, cfg_.length_unit), cfg_);

    std::vector<RewardBreakdown> out(group.size());
    parallel_for(group.size(), jobs_, [&](std::size_t i) {
        const CandidateResponse& c = group[i];

        std::optional<GeoPoint> point = c.resolved_point;
        if (!point && resolver_ && !c.answer.empty()) point = resolver_->forward(c.answer.to_query());
        if (!point) unresolved_.fetch_add(1);

        const double spa = spatial_reward(point, truth.truth_point, cfg_);
        const double sem = semantic_reward(c.answer, truth.truth_address, *provider_, cfg_);

        const ExtractedConclusion conclusion = extractor_->extract(c.reasoning);
        if (conclusion.degraded) degraded_.fetch_add(1);
        LevelArray p{};
        for (std::size_t l = 0; l < kLevels; ++l) {
            p[l] = penalties(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
        }
        const double con = consistency_reward(conclusion.address, truth.truth_address, p, cfg_);
        out[i] = composite_reward(spa, sem, con, cfg_);
    });
    return out;
}

}  // namespace geoseek
