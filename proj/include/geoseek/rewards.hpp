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

// Reward terms for geolocation replies.
//
//   R = a1 * R_spa + a2 * R_sem + a3 * R_con
//
// R_spa decays exponentially with great-circle distance, R_sem is a
// thresholded, hierarchically gated sum of per-level embedding
// similarities, and R_con credits conclusions extracted from the reasoning
// alone, scaled by a per-level length penalty.

#ifndef GEOSEEK_REWARDS_HPP
#define GEOSEEK_REWARDS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "geoseek/address.hpp"
#include "geoseek/config.hpp"
#include "geoseek/embed.hpp"
#include "geoseek/geo.hpp"

namespace geoseek {

struct RewardBreakdown {
    double r_spa = 0.0;
    double r_sem = 0.0;
    double r_con = 0.0;
    double total = 0.0;
};

using LevelArray = std::array<double, kLevels>;

/// exp(-d / tau).
double spatial_reward(DistanceKm d, const RewardConfig& cfg);

/// 0 when the prediction could not be resolved to coordinates.
double spatial_reward(const std::optional<GeoPoint>& pred, const GeoPoint& truth,
                      const RewardConfig& cfg);

/// Per-level cosine similarity between predicted and true address strings.
LevelArray level_similarities(const AddressHierarchy& pred, const AddressHierarchy& truth,
                              const EmbeddingProvider& provider);

/// Thresholding and gating applied to raw similarities:
///   s_hat_i = s_i if s_i > delta_i else 0   (no threshold when delta_i unset)
///   s_hat_i = 0 if i > 0 and s_hat_{i-1} <= 0
/// returns max(0, sum_i alpha_i * s_hat_i).
double semantic_reward_from_similarities(const LevelArray& similarities, const RewardConfig& cfg);

double semantic_reward(const AddressHierarchy& pred, const AddressHierarchy& truth,
                       const EmbeddingProvider& provider, const RewardConfig& cfg);

/// Logistic length penalty on a min-max normalized length:
///   l_hat = (l - min) / (max - min),  p = 1 / (1 + exp(-lambda (l_hat - mu)))
/// When max == min, l_hat is 1 for positive lengths and 0 otherwise.
template <typename Scalar>
Scalar length_penalty_kernel(Scalar length, Scalar group_min, Scalar group_max,
                             const RewardConfig& cfg) {
    using std::exp;
    Scalar normalized;
    if (group_max > group_min) {
        normalized = (length - group_min) / (group_max - group_min);
    } else {
        normalized = length > Scalar(0) ? Scalar(1) : Scalar(0);
    }
    return Scalar(1) / (Scalar(1) + exp(-Scalar(cfg.lambda_pen) * (normalized - Scalar(cfg.mu_pen))));
}

/// Penalty for one level of one candidate. `group_lengths` holds the same
/// level's length for every candidate in the group and must contain
/// `length`; throws std::invalid_argument otherwise.
double length_penalty(double length, std::span<const double> group_lengths,
                      const RewardConfig& cfg);

/// Whole-group penalties: `lengths` is G x 3 (candidate x level), the
/// result has the same shape. Normalization runs per column.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> length_penalties(
    const Eigen::MatrixBase<Derived>& lengths, const RewardConfig& cfg) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(lengths.rows(), lengths.cols());
    if (lengths.rows() == 0) return out;
    for (Eigen::Index c = 0; c < lengths.cols(); ++c) {
        const Scalar lo = lengths.col(c).minCoeff();
        const Scalar hi = lengths.col(c).maxCoeff();
        out.col(c) = lengths.col(c).unaryExpr(
            [&](Scalar l) { return length_penalty_kernel(l, lo, hi, cfg); });
    }
    return out;
}

/// Length of one reasoning level in the configured unit.
double reasoning_length(std::string_view reasoning, LengthUnit unit);

/// G x 3 matrix of reasoning lengths for a group.
Eigen::MatrixXd reasoning_lengths(std::span<const ReasoningTrace> group, LengthUnit unit);

/// True when both levels are nonempty and equal after text::normalize.
bool levels_match(std::string_view a, std::string_view b);

/// sum_i [extracted_i == truth_i] * w_i * p_i.
double consistency_reward(const AddressHierarchy& extracted, const AddressHierarchy& truth,
                          const LevelArray& penalties, const RewardConfig& cfg);

/// total = a1 * spa + a2 * sem + a3 * con. Throws std::invalid_argument
/// for components outside [0, 1].
RewardBreakdown composite_reward(double spa, double sem, double con, const RewardConfig& cfg);

/// Strict text-equality baseline: sum_i [pred_i == truth_i] * w_i.
double directly_judge_reward(const AddressHierarchy& pred, const AddressHierarchy& truth,
                             const RewardConfig& cfg);

}  // namespace geoseek

#endif  // GEOSEEK_REWARDS_HPP
