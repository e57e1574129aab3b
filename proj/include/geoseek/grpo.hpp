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

// Group-relative policy optimization on a toy discrete policy.
//
// Each "reply" is one grid-cell action carrying a canned response, so the
// per-token importance ratio of the full method collapses to one ratio per
// sampled action. The objective math is otherwise the same.

#ifndef GEOSEEK_GRPO_HPP
#define GEOSEEK_GRPO_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geoseek/address.hpp"
#include "geoseek/config.hpp"
#include "geoseek/dataset.hpp"
#include "geoseek/embed.hpp"
#include "geoseek/extract.hpp"
#include "geoseek/geo.hpp"

namespace geoseek {

inline constexpr double kAdvantageEps = 1e-8;

template <typename Derived>
using ColumnOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;

/// A_i = (R_i - mean) / std with the population std. When std <= eps every
/// advantage is zero.
template <typename Derived>
ColumnOf<Derived> group_advantages(const Eigen::MatrixBase<Derived>& rewards,
                                   typename Derived::Scalar eps = typename Derived::Scalar(kAdvantageEps)) {
    using Scalar = typename Derived::Scalar;
    using std::sqrt;
    if (rewards.size() == 0) throw std::invalid_argument("group_advantages: empty group");
    if (!rewards.allFinite()) throw std::invalid_argument("group_advantages: non-finite reward");
    const auto n = Scalar(rewards.size());
    const ColumnOf<Derived> r = rewards.reshaped();
    const Scalar mean = r.sum() / n;
    const ColumnOf<Derived> centered = r.array() - mean;
    const Scalar sd = sqrt(centered.squaredNorm() / n);
    if (!(sd > eps)) return ColumnOf<Derived>::Zero(r.size());
    return centered / sd;
}

/// clip(r, 1 - eps, 1 + eps)
template <typename Scalar>
Scalar clip_ratio(Scalar r, Scalar eps) {
    const Scalar lo = Scalar(1) - eps;
    const Scalar hi = Scalar(1) + eps;
    return r < lo ? lo : (r > hi ? hi : r);
}

/// mean_i min(r_i A_i, clip(r_i, 1 - eps, 1 + eps) A_i)
template <typename DerivedR, typename DerivedA>
typename DerivedR::Scalar clipped_objective(const Eigen::MatrixBase<DerivedR>& ratios,
                                            const Eigen::MatrixBase<DerivedA>& advantages,
                                            typename DerivedR::Scalar eps = typename DerivedR::Scalar(0.2)) {
    using Scalar = typename DerivedR::Scalar;
    using std::min;
    if (ratios.size() != advantages.size() || ratios.size() == 0) {
        throw std::invalid_argument("clipped_objective: ratios and advantages must align");
    }
    if ((ratios.array() <= Scalar(0)).any()) throw std::invalid_argument("clipped_objective: ratios must be positive");
    Scalar sum(0);
    for (Eigen::Index i = 0; i < ratios.size(); ++i) {
        const Scalar r = ratios.reshaped()(i);
        const Scalar a = advantages.reshaped()(i);
        sum += min(r * a, clip_ratio(r, eps) * a);
    }
    return sum / Scalar(ratios.size());
}

/// d objective / d r_i: A_i / n where the unclipped branch is selected,
/// zero where the clipped constant wins.
template <typename DerivedR, typename DerivedA>
ColumnOf<DerivedR> clipped_objective_ratio_grad(const Eigen::MatrixBase<DerivedR>& ratios,
                                                const Eigen::MatrixBase<DerivedA>& advantages,
                                                typename DerivedR::Scalar eps = typename DerivedR::Scalar(0.2)) {
    using Scalar = typename DerivedR::Scalar;
    if (ratios.size() != advantages.size() || ratios.size() == 0) {
        throw std::invalid_argument("clipped_objective_ratio_grad: ratios and advantages must align");
    }
    ColumnOf<DerivedR> g(ratios.size());
    const Scalar n = Scalar(ratios.size());
    for (Eigen::Index i = 0; i < ratios.size(); ++i) {
        const Scalar r = ratios.reshaped()(i);
        const Scalar a = advantages.reshaped()(i);
        g(i) = r * a <= clip_ratio(r, eps) * a ? a / n : Scalar(0);
    }
    return g;
}

/// softmax(logits / t)
Eigen::VectorXd tempered_softmax(const Eigen::VectorXd& logits, double temperature);

/// KL(p || q) for distributions with full support.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// 0.5 * sum |p - q|
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Gradient of the clipped objective with respect to the logits, for
/// sampled actions with ratios pi(a) / pi_old(a).
Eigen::VectorXd clipped_objective_logit_grad(const Eigen::VectorXd& logits, double temperature,
                                             std::span<const std::size_t> actions,
                                             const Eigen::VectorXd& ratios,
                                             const Eigen::VectorXd& advantages, double clip_eps);

/// Gradient of KL(pi || ref) with respect to the logits of pi.
Eigen::VectorXd kl_logit_grad(const Eigen::VectorXd& logits, double temperature,
                              const Eigen::VectorXd& reference);

struct ToyCell {
    GeoPoint centroid;
    CandidateResponse response;
};

struct ToyPolicy {
    Eigen::VectorXd logits;
    double temperature = 0.7;
    std::vector<ToyCell> cells;

    /// Throws std::invalid_argument when logits and cells disagree in size,
    /// logits are non-finite, or the temperature is not positive.
    void validate() const;
    Eigen::VectorXd probabilities() const { return tempered_softmax(logits, temperature); }
    std::size_t argmax() const;
};

struct PlantedWorld {
    ToyPolicy policy;
    LocationRecord truth;
    std::size_t truth_cell = 0;
};

/// A square lattice of k cells (2 degree spacing) around a truth cell.
/// Only the truth cell answers with the correct full address and point.
/// Every cell shares the country and the 3 x 3 neighbourhood of the truth
/// shares its region. Reasoning texts state each cell's own conclusions.
/// Logits start at 0.
PlantedWorld make_planted_world(std::size_t k, double temperature = 0.7);

struct SimOptions {
    std::uint64_t seed = 42;
    std::optional<double> learning_rate;  // overrides GrpoConfig
    std::optional<double> kl_beta;        // overrides GrpoConfig
    bool use_spatial = true;
    bool use_semantic = true;
    bool use_consistency = true;
    /// Replace every reward with this value.
    std::optional<double> constant_reward;
    /// Gradient steps per sampled group; ratios are 1 on the first.
    std::size_t updates_per_group = 1;
};

struct TrainingStep {
    std::size_t step = 0;
    double mean_r_spa = 0.0;
    double mean_r_sem = 0.0;
    double mean_r_con = 0.0;
    double mean_total = 0.0;
};

struct TrainingTrace {
    std::vector<TrainingStep> steps;
    Eigen::VectorXd initial_logits;
    Eigen::VectorXd final_logits;

    /// step,mean_r_spa,mean_r_sem,mean_r_con,mean_total
    std::string to_csv() const;
};

/// Runs `steps` GRPO steps on `policy` (updated in place). Rewards come
/// from the rewards module: each cell's canned response against `truth`,
/// with conclusions drawn from its reasoning by `extractor`.
TrainingTrace simulate_training(ToyPolicy& policy, const LocationRecord& truth,
                                const Hyperparameters& hp, std::size_t steps,
                                const EmbeddingProvider& provider,
                                const ConclusionExtractor& extractor, const SimOptions& options = {});

/// First step whose trailing `window`-step moving average reaches
/// `fraction` of the series' final value (mean of the last `tail` share of
/// steps). Returns the series length when it never does.
std::size_t convergence_step(std::span<const double> series, double fraction = 0.9,
                             std::size_t window = 25, double tail = 0.1);

}  // namespace geoseek

#endif  // GEOSEEK_GRPO_HPP
