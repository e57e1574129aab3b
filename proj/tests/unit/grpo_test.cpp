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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "geoseek/grpo.hpp"
#include "oracle/oracle.hpp"
#include "support/support.hpp"

namespace {

using namespace geoseek;
using testing_support::for_all;
using testing_support::Gen;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

TEST(Advantages, StandardizesWithPopulationStd) {
    const auto a = group_advantages(vec({1, 2, 3}));
    const double s = std::sqrt(2.0 / 3.0);
    EXPECT_NEAR(a[0], -1 / s, 1e-15);
    EXPECT_NEAR(a[1], 0.0, 1e-15);
    EXPECT_NEAR(a[2], 1 / s, 1e-15);
}

TEST(Advantages, ConstantGroupGivesZeros) {
    EXPECT_TRUE(group_advantages(vec({0.7, 0.7, 0.7, 0.7})).isZero(0.0));
    EXPECT_TRUE(group_advantages(vec({1.0, 1.0 + 1e-9})).isZero(0.0));
    EXPECT_TRUE(group_advantages(vec({5.0})).isZero(0.0));
}

TEST(Advantages, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(group_advantages(Eigen::VectorXd()), std::invalid_argument);
    EXPECT_THROW(group_advantages(vec({1, NAN})), std::invalid_argument);
}

TEST(AdvantagesProperty, ZeroMeanUnitStdAndAffineInvariant) {
    for_all(41, 500, [](Gen& g, std::size_t i) {
        const auto n = g.integer(2, 16);
        Eigen::VectorXd r(n);
        for (auto& x : r) x = g.uniform(0, 3);
        const auto a = group_advantages(r);
        ASSERT_NEAR(a.mean(), 0.0, 1e-12) << "case " << i;
        ASSERT_NEAR(std::sqrt(a.squaredNorm() / static_cast<double>(n)), 1.0, 1e-12);
        const double shift = g.uniform(-10, 10), scale = g.uniform(0.1, 10);
        const Eigen::VectorXd r2 = (r.array() * scale + shift).matrix();
        ASSERT_LT((group_advantages(r2) - a).norm(), 1e-9);
        std::vector<double> rv(r.data(), r.data() + n);
        ASSERT_LT(oracle::normwise_rel_err(a, oracle::advantages(rv)), 1e-12);
    });
}

TEST(Advantages, WorksOnRowsAndFloat) {
    Eigen::RowVector3f r(1.f, 2.f, 3.f);
    const auto a = group_advantages(r);
    EXPECT_NEAR(a[2], 1.2247449f, 1e-6f);
}

TEST(ClippedObjective, Examples) {
    EXPECT_NEAR(clipped_objective(vec({1.5}), vec({1.0})), 1.2, 1e-15);
    EXPECT_NEAR(clipped_objective(vec({0.5}), vec({-1.0})), -0.8, 1e-15);
    EXPECT_NEAR(clipped_objective(vec({0.5}), vec({1.0})), 0.5, 1e-15);
    EXPECT_NEAR(clipped_objective(vec({1.5}), vec({-1.0})), -1.5, 1e-15);
    EXPECT_NEAR(clipped_objective(vec({1.0, 1.0}), vec({1.0, -1.0})), 0.0, 1e-15);
    EXPECT_THROW(clipped_objective(vec({1.0}), vec({1.0, 2.0})), std::invalid_argument);
    EXPECT_THROW(clipped_objective(vec({0.0}), vec({1.0})), std::invalid_argument);
}

TEST(ClippedObjectiveProperty, MatchesOracleAndIsPessimistic) {
    for_all(42, 500, [](Gen& g, std::size_t i) {
        const auto n = g.integer(1, 16);
        std::vector<double> r(static_cast<std::size_t>(n)), a(static_cast<std::size_t>(n));
        for (auto& x : r) x = g.uniform(0.3, 1.8);
        for (auto& x : a) x = g.uniform(-2, 2);
        const Eigen::Map<const Eigen::VectorXd> rv(r.data(), n), av(a.data(), n);
        const double got = clipped_objective(rv, av);
        ASSERT_LT(oracle::rel_err(got, oracle::clipped_objective(r, a)), 1e-12) << "case " << i;
        ASSERT_LE(got, (rv.array() * av.array()).mean() + 1e-15);
    });
}

TEST(Softmax, TemperatureAndNormalization) {
    const auto p = tempered_softmax(vec({0, std::log(2.0)}), 1.0);
    EXPECT_NEAR(p[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(p.sum(), 1.0, 1e-15);
    const auto sharp = tempered_softmax(vec({0, 1}), 0.1);
    EXPECT_GT(sharp[1], 0.9999);
    EXPECT_TRUE(tempered_softmax(vec({1000, 1000}), 0.7).allFinite());
}

TEST(Divergences, Basics) {
    const auto p = vec({0.5, 0.5}), q = vec({0.9, 0.1});
    EXPECT_EQ(kl_divergence(p, p), 0.0);
    EXPECT_GT(kl_divergence(p, q), 0.0);
    EXPECT_NEAR(total_variation(p, q), 0.4, 1e-15);
}

double objective_at(const Eigen::VectorXd& z, double t, const std::vector<std::size_t>& acts,
                    const Eigen::VectorXd& old_pi, const Eigen::VectorXd& adv) {
    const auto pi = tempered_softmax(z, t);
    Eigen::VectorXd r(static_cast<Eigen::Index>(acts.size()));
    for (std::size_t i = 0; i < acts.size(); ++i) r[static_cast<Eigen::Index>(i)] = pi[static_cast<Eigen::Index>(acts[i])] / old_pi[static_cast<Eigen::Index>(acts[i])];
    return clipped_objective(r, adv);
}

TEST(Gradients, ObjectiveGradientMatchesFiniteDifferences) {
    for_all(43, 100, [](Gen& g, std::size_t i) {
        const Eigen::Index k = g.integer(2, 10);
        const double t = g.uniform(0.5, 1.5);
        Eigen::VectorXd z0(k), z(k);
        for (auto& x : z0) x = g.uniform(-1, 1);
        z = z0;
        for (auto& x : z) x += g.uniform(-0.05, 0.05);
        const auto old_pi = tempered_softmax(z0, t);
        std::vector<std::size_t> acts(8);
        for (auto& a : acts) a = static_cast<std::size_t>(g.integer(0, k - 1));
        Eigen::VectorXd adv(8);
        for (auto& a : adv) a = g.uniform(-2, 2);
        const auto pi = tempered_softmax(z, t);
        Eigen::VectorXd r(8);
        for (int j = 0; j < 8; ++j) r[j] = pi[static_cast<Eigen::Index>(acts[static_cast<std::size_t>(j)])] / old_pi[static_cast<Eigen::Index>(acts[static_cast<std::size_t>(j)])];
        // Keep away from the clip kinks where the derivative is undefined.
        if (((r.array() - 0.8).abs() < 1e-3).any() || ((r.array() - 1.2).abs() < 1e-3).any()) return;
        const auto analytic = clipped_objective_logit_grad(z, t, acts, r, adv, 0.2);
        const double h = 1e-6;
        for (Eigen::Index j = 0; j < k; ++j) {
            Eigen::VectorXd zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const double fd = (objective_at(zp, t, acts, old_pi, adv) - objective_at(zm, t, acts, old_pi, adv)) / (2 * h);
            ASSERT_NEAR(analytic[j], fd, 1e-7) << "case " << i << " logit " << j;
        }
    });
}

TEST(Gradients, ClippedSamplesContributeNothing) {
    const auto z = vec({0, 0, 0});
    const std::vector<std::size_t> acts{0};
    const auto g = clipped_objective_logit_grad(z, 1.0, acts, vec({1.5}), vec({1.0}), 0.2);
    EXPECT_TRUE(g.isZero(0.0));
}

TEST(Gradients, KlGradientMatchesFiniteDifferences) {
    for_all(44, 100, [](Gen& g, std::size_t i) {
        const Eigen::Index k = g.integer(2, 10);
        const double t = g.uniform(0.5, 1.5);
        Eigen::VectorXd z(k), zr(k);
        for (auto& x : z) x = g.uniform(-2, 2);
        for (auto& x : zr) x = g.uniform(-2, 2);
        const auto ref = tempered_softmax(zr, t);
        const auto analytic = kl_logit_grad(z, t, ref);
        const double h = 1e-6;
        for (Eigen::Index j = 0; j < k; ++j) {
            Eigen::VectorXd zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const double fd = (kl_divergence(tempered_softmax(zp, t), ref) - kl_divergence(tempered_softmax(zm, t), ref)) / (2 * h);
            ASSERT_NEAR(analytic[j], fd, 1e-7) << "case " << i;
        }
    });
}

TEST(PlantedWorld, Layout) {
    const auto w = make_planted_world(64);
    EXPECT_EQ(w.policy.cells.size(), 64u);
    EXPECT_EQ(w.truth_cell, 36u);
    EXPECT_TRUE(w.policy.logits.isZero(0.0));
    EXPECT_EQ(w.policy.temperature, 0.7);
    const auto& truth_cell = w.policy.cells[w.truth_cell].response;
    EXPECT_EQ(truth_cell.answer, w.truth.truth_address);
    EXPECT_THROW(make_planted_world(1), std::invalid_argument);
    EXPECT_THROW(make_planted_world(401), std::invalid_argument);
    // Only the truth cell has the full correct address.
    for (std::size_t c = 0; c < w.policy.cells.size(); ++c) {
        if (c != w.truth_cell) { EXPECT_NE(w.policy.cells[c].response.answer, w.truth.truth_address); }
    }
}

TEST(PlantedWorld, ValidateRejectsMismatch) {
    auto w = make_planted_world(9);
    w.policy.logits = Eigen::VectorXd::Zero(3);
    EXPECT_THROW(w.policy.validate(), std::invalid_argument);
}

struct SimFixture : ::testing::Test {
    NgramEmbedder provider;
    PatternExtractor extractor;
    Hyperparameters hp;
};

TEST_F(SimFixture, ConvergesToPlantedTruth) {
    auto w = make_planted_world(64);
    const auto trace = simulate_training(w.policy, w.truth, hp, 500, provider, extractor, {});
    EXPECT_EQ(w.policy.argmax(), w.truth_cell);
    EXPECT_EQ(trace.steps.size(), 500u);
    EXPECT_GT(trace.steps.back().mean_total, trace.steps.front().mean_total);
}

TEST_F(SimFixture, SameSeedSameTrace) {
    auto a = make_planted_world(16);
    auto b = make_planted_world(16);
    SimOptions o;
    o.seed = 7;
    EXPECT_EQ(simulate_training(a.policy, a.truth, hp, 50, provider, extractor, o).to_csv(),
              simulate_training(b.policy, b.truth, hp, 50, provider, extractor, o).to_csv());
}

TEST_F(SimFixture, ZeroLearningRateLeavesLogitsUntouched) {
    auto w = make_planted_world(16);
    SimOptions o;
    o.learning_rate = 0.0;
    const auto trace = simulate_training(w.policy, w.truth, hp, 100, provider, extractor, o);
    EXPECT_TRUE(trace.final_logits.cwiseEqual(trace.initial_logits).all());
}

TEST_F(SimFixture, ConstantRewardsLeaveLogitsWithinTolerance) {
    auto w = make_planted_world(64);
    SimOptions o;
    o.constant_reward = 1.0;
    const auto trace = simulate_training(w.policy, w.truth, hp, 500, provider, extractor, o);
    EXPECT_LE((trace.final_logits - trace.initial_logits).cwiseAbs().maxCoeff(), 1e-6);
}

TEST_F(SimFixture, StrongKlPenaltyKeepsPolicyNearReference) {
    auto w = make_planted_world(64);
    const auto initial = w.policy.probabilities();
    SimOptions o;
    o.kl_beta = 10.0;
    simulate_training(w.policy, w.truth, hp, 500, provider, extractor, o);
    EXPECT_LT(total_variation(w.policy.probabilities(), initial), 0.05);
}

TEST_F(SimFixture, CsvHasHeaderAndOneRowPerStep) {
    auto w = make_planted_world(9);
    const auto csv = simulate_training(w.policy, w.truth, hp, 3, provider, extractor, {}).to_csv();
    EXPECT_EQ(csv.rfind("step,mean_r_spa,mean_r_sem,mean_r_con,mean_total\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(ConvergenceStep, Examples) {
    const std::vector<double> ramp{0, 0.5, 1, 1, 1, 1, 1, 1, 1, 1};
    EXPECT_EQ(convergence_step(ramp, 0.9, 1, 0.1), 2u);
    EXPECT_EQ(convergence_step(ramp, 0.9, 2, 0.1), 3u);
    const std::vector<double> flat{1, 1, 1};
    EXPECT_EQ(convergence_step(flat), 0u);
    EXPECT_THROW(convergence_step(std::span<const double>{}), std::invalid_argument);
}

}  // namespace
