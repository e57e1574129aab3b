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

#include "geoseek/rewards.hpp"

#include <algorithm>

#include "geoseek/text.hpp"

namespace geoseek {

double spatial_reward(DistanceKm d, const RewardConfig& cfg) {
    return std::exp(-d.value() / cfg.tau_km);
}

double spatial_reward(const std::optional<GeoPoint>& pred, const GeoPoint& truth,
                      const RewardConfig& cfg) {
    if (!pred) return 0.0;
    return spatial_reward(haversine_distance(*pred, truth), cfg);
}

LevelArray level_similarities(const AddressHierarchy& pred, const AddressHierarchy& truth,
                              const EmbeddingProvider& provider) {
    LevelArray s{};
    for (std::size_t i = 0; i < kLevels; ++i) {
        s[i] = cosine_similarity(provider.embed(pred.level(i)), provider.embed(truth.level(i)));
    }
    return s;
}

double semantic_reward_from_similarities(const LevelArray& similarities, const RewardConfig& cfg) {
    double sum = 0.0;
    double parent = 1.0;
    for (std::size_t i = 0; i < kLevels; ++i) {
        const double s = similarities[i];
        double kept = (!cfg.delta[i] || s > *cfg.delta[i]) ? s : 0.0;
        if (!(parent > 0.0)) kept = 0.0;
        sum += cfg.alpha[i] * kept;
        parent = kept;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double semantic_reward(const AddressHierarchy& pred, const AddressHierarchy& truth,
                       const EmbeddingProvider& provider, const RewardConfig& cfg) {
    return semantic_reward_from_similarities(level_similarities(pred, truth, provider), cfg);
}

double length_penalty(double length, std::span<const double> group_lengths,
                      const RewardConfig& cfg) {
    if (group_lengths.empty()) throw std::invalid_argument("length_penalty: empty group");
    if (std::find(group_lengths.begin(), group_lengths.end(), length) == group_lengths.end()) {
        throw std::invalid_argument("length_penalty: candidate length not in its group");
    }
    const auto [lo, hi] = std::minmax_element(group_lengths.begin(), group_lengths.end());
    return length_penalty_kernel(length, *lo, *hi, cfg);
}

double reasoning_length(std::string_view reasoning, LengthUnit unit) {
    switch (unit) {
        case LengthUnit::Grapheme: return static_cast<double>(text::grapheme_count(reasoning));
        case LengthUnit::Codepoint: return static_cast<double>(text::codepoint_count(reasoning));
        case LengthUnit::Word: return static_cast<double>(text::word_count(reasoning));
    }
    return 0.0;
}

Eigen::MatrixXd reasoning_lengths(std::span<const ReasoningTrace> group, LengthUnit unit) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(group.size()), static_cast<Eigen::Index>(kLevels));
    for (std::size_t g = 0; g < group.size(); ++g) {
        for (std::size_t i = 0; i < kLevels; ++i) {
            out(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i)) =
                reasoning_length(group[g].level(i), unit);
        }
    }
    return out;
}

bool levels_match(std::string_view a, std::string_view b) {
    const std::string na = text::normalize(a);
    return !na.empty() && na == text::normalize(b);
}

double consistency_reward(const AddressHierarchy& extracted, const AddressHierarchy& truth,
                          const LevelArray& penalties, const RewardConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kLevels; ++i) {
        if (levels_match(extracted.level(i), truth.level(i))) sum += cfg.w[i] * penalties[i];
    }
    return std::clamp(sum, 0.0, 1.0);
}

RewardBreakdown composite_reward(double spa, double sem, double con, const RewardConfig& cfg) {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(spa) || !in_unit(sem) || !in_unit(con)) {
        throw std::invalid_argument("composite_reward: components must lie in [0, 1]");
    }
    return {spa, sem, con, cfg.a[0] * spa + cfg.a[1] * sem + cfg.a[2] * con};
}

double directly_judge_reward(const AddressHierarchy& pred, const AddressHierarchy& truth,
                             const RewardConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kLevels; ++i) {
        if (levels_match(pred.level(i), truth.level(i))) sum += cfg.w[i];
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace geoseek
