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

#include "geoseek/grpo.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "geoseek/rewards.hpp"
#include "geoseek/sampling.hpp"

namespace geoseek {
namespace {

constexpr std::array<const char*, 16> kSyllables = {"ka", "lor", "ven", "mi", "tas", "bru", "del", "on",
                                                    "sa", "rik", "ul", "fen", "go", "ther", "nia", "pol"};

// Distinct pronounceable name for each v in [0, 4096).
std::string synthetic_name(std::size_t v) {
    std::string s = std::string(kSyllables[(v >> 8) & 15]) + kSyllables[(v >> 4) & 15] + kSyllables[v & 15];
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

constexpr std::array<const char*, 6> kFiller = {
    "Vegetation is dense along the verges.",
    "Utility poles are concrete with a single crossbar.",
    "Most roofs are tiled in a pale orange clay.",
    "The road has a dashed centre line and no hard shoulder.",
    "Several shop fronts show hand-painted lettering.",
    "The sun sits high, which points away from the polar latitudes.",
};

std::string with_filler(std::size_t cell, std::size_t level, std::string conclusion) {
    std::string out;
    const std::size_t n = (cell * 5 + level * 3) % 4;
    for (std::size_t i = 0; i < n; ++i) {
        out += kFiller[(cell + level + i) % kFiller.size()];
        out += ' ';
    }
    return out + conclusion;
}

}  // namespace

Eigen::VectorXd tempered_softmax(const Eigen::VectorXd& logits, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("softmax: temperature must be positive");
    if (logits.size() == 0) throw std::invalid_argument("softmax: no logits");
    const Eigen::ArrayXd z = logits.array() / temperature;
    const Eigen::ArrayXd e = (z - z.maxCoeff()).exp();
    return (e / e.sum()).matrix();
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
    double kl = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) kl += p[i] * (std::log(p[i]) - std::log(q[i]));
    }
    return kl;
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    return 0.5 * (p - q).cwiseAbs().sum();
}

Eigen::VectorXd clipped_objective_logit_grad(const Eigen::VectorXd& logits, double temperature,
                                             std::span<const std::size_t> actions,
                                             const Eigen::VectorXd& ratios,
                                             const Eigen::VectorXd& advantages, double clip_eps) {
    if (actions.size() != static_cast<std::size_t>(ratios.size())) {
        throw std::invalid_argument("clipped_objective_logit_grad: actions and ratios must align");
    }
    const Eigen::VectorXd pi = tempered_softmax(logits, temperature);
    const Eigen::VectorXd dr = clipped_objective_ratio_grad(ratios, advantages, clip_eps);
    // d r_i / d z = r_i (e_{a_i} - pi) / t
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(logits.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double c = dr[ii] * ratios[ii] / temperature;
        grad[static_cast<Eigen::Index>(actions[i])] += c;
        mass += c;
    }
    return grad - mass * pi;
}

Eigen::VectorXd kl_logit_grad(const Eigen::VectorXd& logits, double temperature,
                              const Eigen::VectorXd& reference) {
    const Eigen::VectorXd pi = tempered_softmax(logits, temperature);
    const double kl = kl_divergence(pi, reference);
    const Eigen::ArrayXd log_ratio = pi.array().log() - reference.array().log();
    return (pi.array() * (log_ratio - kl) / temperature).matrix();
}

void ToyPolicy::validate() const {
    if (logits.size() == 0 || static_cast<std::size_t>(logits.size()) != cells.size()) {
        throw std::invalid_argument("ToyPolicy: need one logit per cell");
    }
    if (!logits.allFinite()) throw std::invalid_argument("ToyPolicy: non-finite logits");
    if (!(temperature > 0.0)) throw std::invalid_argument("ToyPolicy: temperature must be positive");
}

std::size_t ToyPolicy::argmax() const {
    Eigen::Index i = 0;
    logits.maxCoeff(&i);
    return static_cast<std::size_t>(i);
}

PlantedWorld make_planted_world(std::size_t k, double temperature) {
    if (k < 2 || k > 400) throw std::invalid_argument("make_planted_world: k must be in [2, 400]");
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    const std::size_t rows = (k + side - 1) / side;
    std::size_t truth_row = rows / 2;
    const std::size_t truth_col = side / 2;
    while (truth_row * side + truth_col >= k) --truth_row;

    constexpr double kSpacingDeg = 2.0;
    constexpr double kBaseLat = 10.5;
    constexpr double kBaseLon = 20.5;
    const std::string country = "Aldoria";
    const std::string truth_region = synthetic_name(2048);

    ToyPolicy policy;
    const std::size_t truth_cell = truth_row * side + truth_col;
    policy.temperature = temperature;
    policy.logits = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = static_cast<long>(i / side);
        const auto col = static_cast<long>(i % side);
        const long dr = row - static_cast<long>(truth_row);
        const long dc = col - static_cast<long>(truth_col);
        const GeoPoint centroid(kBaseLat + kSpacingDeg * static_cast<double>(dr),
                                kBaseLon + kSpacingDeg * static_cast<double>(dc));
        const bool near = std::max(std::labs(dr), std::labs(dc)) <= 1;
        const std::string region =
            near ? truth_region : synthetic_name(2048 + 1 + static_cast<std::size_t>(row / 3) * 64 +
                                                 static_cast<std::size_t>(col / 3));
        const std::string precise = synthetic_name(i);

        ReasoningTrace reasoning(
            with_filler(i, 0, "Plate colours and the script on the signs indicate " + country + "."),
            with_filler(i, 1, "The terrain and the regional road numbering point to " + region + "."),
            with_filler(i, 2, "The station name on the platform suggests " + precise + "."));
        policy.cells.push_back(
            {centroid, CandidateResponse{std::move(reasoning), AddressHierarchy(country, region, precise), centroid}});
    }
    const ToyCell& t = policy.cells[truth_cell];
    LocationRecord truth{"planted", GeoPoint(t.centroid.lat() + 0.1, t.centroid.lon() + 0.15), t.response.answer,
                         std::nullopt, {}};
    return PlantedWorld{std::move(policy), std::move(truth), truth_cell};
}

std::string TrainingTrace::to_csv() const {
    std::string out = "step,mean_r_spa,mean_r_sem,mean_r_con,mean_total\n";
    for (const auto& s : steps) {
        out += fmt::format("{},{:.9f},{:.9f},{:.9f},{:.9f}\n", s.step, s.mean_r_spa, s.mean_r_sem, s.mean_r_con,
                           s.mean_total);
    }
    return out;
}

TrainingTrace simulate_training(ToyPolicy& policy, const LocationRecord& truth, const Hyperparameters& hp,
                                std::size_t steps, const EmbeddingProvider& provider,
                                const ConclusionExtractor& extractor, const SimOptions& options) {
    policy.validate();
    hp.reward.validate();
    hp.grpo.validate();
    if (steps < 1) throw std::invalid_argument("simulate_training: steps must be >= 1");
    if (options.updates_per_group < 1) throw std::invalid_argument("simulate_training: updates_per_group must be >= 1");
    const RewardConfig& cfg = hp.reward;
    const double lr = options.learning_rate.value_or(hp.grpo.learning_rate);
    const double beta = options.kl_beta.value_or(hp.grpo.kl_beta);
    const std::size_t g = hp.grpo.group_size;
    const std::size_t k = policy.cells.size();

    // Per-cell terms that do not depend on the rest of the group.
    std::vector<double> spa(k), sem(k);
    std::vector<std::array<bool, kLevels>> match(k);
    std::vector<ReasoningTrace> traces(k);
    for (std::size_t c = 0; c < k; ++c) {
        const CandidateResponse& r = policy.cells[c].response;
        spa[c] = spatial_reward(r.resolved_point, truth.truth_point, cfg);
        sem[c] = semantic_reward(r.answer, truth.truth_address, provider, cfg);
        const AddressHierarchy concluded = extractor.extract(r.reasoning).address;
        for (std::size_t l = 0; l < kLevels; ++l) {
            match[c][l] = levels_match(concluded.level(l), truth.truth_address.level(l));
        }
        traces[c] = r.reasoning;
    }
    const Eigen::MatrixXd cell_lengths = reasoning_lengths(traces, cfg.length_unit);

    TrainingTrace trace;
    trace.initial_logits = policy.logits;
    const Eigen::VectorXd reference = policy.probabilities();
    std::mt19937_64 gen(options.seed);
    std::vector<std::size_t> actions(g);
    Eigen::MatrixXd lengths(static_cast<Eigen::Index>(g), 3);
    Eigen::VectorXd rewards(static_cast<Eigen::Index>(g));

    for (std::size_t step = 1; step <= steps; ++step) {
        const Eigen::VectorXd old_pi = policy.probabilities();
        Eigen::VectorXd cumulative = old_pi;
        std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
        for (std::size_t i = 0; i < g; ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            actions[i] = select_weighted(cumulative, u);
            lengths.row(static_cast<Eigen::Index>(i)) = cell_lengths.row(static_cast<Eigen::Index>(actions[i]));
        }
        const Eigen::MatrixXd penalties = length_penalties(lengths, cfg);

        TrainingStep rec;
        rec.step = step;
        for (std::size_t i = 0; i < g; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const std::size_t c = actions[i];
            double con = 0.0;
            for (std::size_t l = 0; l < kLevels; ++l) {
                if (match[c][l]) con += cfg.w[l] * penalties(ii, static_cast<Eigen::Index>(l));
            }
            const RewardBreakdown b = composite_reward(spa[c], sem[c], con, cfg);
            rec.mean_r_spa += b.r_spa;
            rec.mean_r_sem += b.r_sem;
            rec.mean_r_con += b.r_con;
            rewards[ii] = options.constant_reward
                              ? *options.constant_reward
                              : (options.use_spatial ? cfg.a[0] * b.r_spa : 0.0) +
                                    (options.use_semantic ? cfg.a[1] * b.r_sem : 0.0) +
                                    (options.use_consistency ? cfg.a[2] * b.r_con : 0.0);
            rec.mean_total += rewards[ii];
        }
        const double inv_g = 1.0 / static_cast<double>(g);
        rec.mean_r_spa *= inv_g;
        rec.mean_r_sem *= inv_g;
        rec.mean_r_con *= inv_g;
        rec.mean_total *= inv_g;
        trace.steps.push_back(rec);

        const Eigen::VectorXd adv = group_advantages(rewards);
        for (std::size_t u = 0; u < options.updates_per_group; ++u) {
            const Eigen::VectorXd pi = policy.probabilities();
            Eigen::VectorXd ratios(static_cast<Eigen::Index>(g));
            for (std::size_t i = 0; i < g; ++i) {
                ratios[static_cast<Eigen::Index>(i)] = pi[static_cast<Eigen::Index>(actions[i])] /
                                                       old_pi[static_cast<Eigen::Index>(actions[i])];
            }
            const Eigen::VectorXd ascent =
                clipped_objective_logit_grad(policy.logits, policy.temperature, actions, ratios, adv,
                                             hp.grpo.clip_eps) -
                beta * kl_logit_grad(policy.logits, policy.temperature, reference);
            policy.logits += lr * ascent;
        }
    }
    trace.final_logits = policy.logits;
    return trace;
}

std::size_t convergence_step(std::span<const double> series, double fraction, std::size_t window, double tail) {
    if (series.empty()) throw std::invalid_argument("convergence_step: empty series");
    if (window < 1) window = 1;
    const auto n = series.size();
    const auto tail_n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail * static_cast<double>(n))));
    const double final_value =
        std::accumulate(series.end() - static_cast<std::ptrdiff_t>(tail_n), series.end(), 0.0) /
        static_cast<double>(tail_n);
    const double target = fraction * final_value;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += series[i];
        if (i >= window) sum -= series[i - window];
        const double avg = sum / static_cast<double>(std::min(i + 1, window));
        if (avg >= target) return i;
    }
    return n;
}

}  // namespace geoseek
