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

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "geoseek/engine.hpp"
#include "geoseek/rewards.hpp"
#include "oracle/oracle.hpp"
#include "support/support.hpp"

namespace {

using namespace geoseek;
using testing_support::for_all;
using testing_support::Gen;

// Unit vectors at a chosen angle to e1, so cos(text, anchor) is exact.
class AngleProvider final : public EmbeddingProvider {
public:
    explicit AngleProvider(std::map<std::string, double> cosines) : cosines_(std::move(cosines)) {}
    EmbeddingVector embed(std::string_view text) const override {
        EmbeddingVector v = EmbeddingVector::Zero(2);
        if (text.empty()) return v;
        const auto it = cosines_.find(std::string(text));
        const double c = it == cosines_.end() ? 1.0 : it->second;
        v << c, std::sqrt(std::max(0.0, 1.0 - c * c));
        return v;
    }
    std::size_t dimension() const override { return 2; }
    std::string provider_id() const override { return "angle"; }

private:
    std::map<std::string, double> cosines_;
};

const RewardConfig kCfg{};

TEST(Spatial, Examples) {
    const GeoPoint truth(10, 20);
    EXPECT_DOUBLE_EQ(spatial_reward(truth, truth, kCfg), 1.0);
    EXPECT_NEAR(spatial_reward(DistanceKm(200), kCfg), 0.36787944117144233, 1e-15);
    EXPECT_EQ(spatial_reward(std::nullopt, truth, kCfg), 0.0);
}

TEST(SpatialProperty, StrictlyDecreasingInDistance) {
    for_all(31, 50, [](Gen& g, std::size_t i) {
        auto d = g.reals(20, 0.0, 5000.0);
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        for (std::size_t k = 1; k < d.size(); ++k) {
            ASSERT_GT(spatial_reward(DistanceKm(d[k - 1]), kCfg), spatial_reward(DistanceKm(d[k]), kCfg))
                << "case " << i;
        }
        for (double x : d) ASSERT_LT(oracle::rel_err(spatial_reward(DistanceKm(x), kCfg), oracle::spatial(x)), 1e-12);
    });
}

TEST(Semantic, IdenticalAddressScoresOne) {
    const NgramEmbedder e;
    const AddressHierarchy a("France", "Ile-de-France", "Eiffel Tower");
    EXPECT_NEAR(semantic_reward(a, a, e, kCfg), 1.0, 1e-12);
}

TEST(Semantic, CountryBelowThresholdGatesEverything) {
    const AngleProvider p({{"Wrongland", 0.5}});
    const AddressHierarchy truth("Rightland", "R", "P");
    EXPECT_EQ(semantic_reward(AddressHierarchy("Wrongland", "R", "P"), truth, p, kCfg), 0.0);
    EXPECT_EQ(semantic_reward_from_similarities({0.5, 1.0, 1.0}, kCfg), 0.0);
}

TEST(Semantic, EmptyPreciseLevelContributesNothing) {
    const NgramEmbedder e;
    const AddressHierarchy truth("France", "Ile-de-France", "Eiffel Tower");
    EXPECT_NEAR(semantic_reward(AddressHierarchy("France", "Ile-de-France", ""), truth, e, kCfg), 0.7, 1e-12);
}

TEST(Semantic, ThresholdsAreStrict) {
    EXPECT_NEAR(semantic_reward_from_similarities({0.7, 1.0, 1.0}, kCfg), 0.0, 0.0);
    EXPECT_NEAR(semantic_reward_from_similarities({0.71, 0.5, 1.0}, kCfg), 0.071, 1e-15);
    EXPECT_NEAR(semantic_reward_from_similarities({0.71, 0.51, 0.2}, kCfg), 0.071 + 0.306 + 0.06, 1e-12);
}

TEST(Semantic, PreciseLevelHasNoThreshold) {
    EXPECT_NEAR(semantic_reward_from_similarities({1.0, 1.0, 0.01}, kCfg), 0.7 + 0.003, 1e-12);
}

TEST(Semantic, NegativeSimilarityClampsToZero) {
    RewardConfig cfg;
    cfg.delta = {std::nullopt, std::nullopt, std::nullopt};
    EXPECT_EQ(semantic_reward_from_similarities({-0.9, -0.9, -0.9}, cfg), 0.0);
}

TEST(SemanticProperty, BoundedAndGatingMonotone) {
    for_all(32, 1000, [](Gen& g, std::size_t i) {
        const LevelArray s{g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)};
        const double r = semantic_reward_from_similarities(s, kCfg);
        ASSERT_GE(r, 0.0);
        ASSERT_LE(r, 1.0);
        const LevelArray zeroed{0.0, s[1], s[2]};
        ASSERT_LE(semantic_reward_from_similarities(zeroed, kCfg), r) << "case " << i;
    });
}

TEST(LengthPenalty, Examples) {
    const std::vector<double> g{0, 100};
    EXPECT_NEAR(length_penalty(100, g, kCfg), 0.99908894880559935, 1e-15);
    EXPECT_NEAR(length_penalty(0, g, kCfg), 0.047425873177566781, 1e-15);
    const std::vector<double> flat{42, 42, 42};
    const double p = length_penalty(42, flat, kCfg);
    EXPECT_NEAR(p, 0.99908894880559935, 1e-15);
    const std::vector<double> zeros{0, 0};
    EXPECT_NEAR(length_penalty(0, zeros, kCfg), 0.047425873177566781, 1e-15);
}

TEST(LengthPenalty, HalfAtMu) {
    const std::vector<double> g{0, 30, 100};
    EXPECT_NEAR(length_penalty(30, g, kCfg), 0.5, 1e-15);
}

TEST(LengthPenalty, RejectsLengthOutsideGroup) {
    const std::vector<double> g{1, 2};
    EXPECT_THROW(length_penalty(3, g, kCfg), std::invalid_argument);
    EXPECT_THROW(length_penalty(3, std::span<const double>{}, kCfg), std::invalid_argument);
}

TEST(LengthPenaltyProperty, MatchesOracleAndGroupMatrix) {
    for_all(33, 500, [](Gen& g, std::size_t i) {
        const auto n = static_cast<std::size_t>(g.integer(1, 8));
        Eigen::MatrixXd lengths(static_cast<Eigen::Index>(n), 3);
        for (Eigen::Index r = 0; r < lengths.rows(); ++r) {
            for (Eigen::Index c = 0; c < 3; ++c) lengths(r, c) = static_cast<double>(g.integer(0, 400));
        }
        const Eigen::MatrixXd p = length_penalties(lengths, kCfg);
        for (Eigen::Index c = 0; c < 3; ++c) {
            std::vector<double> col(lengths.col(c).data(), lengths.col(c).data() + n);
            for (Eigen::Index r = 0; r < lengths.rows(); ++r) {
                ASSERT_EQ(p(r, c), length_penalty(lengths(r, c), col, kCfg));
                ASSERT_LT(oracle::rel_err(p(r, c), oracle::length_penalty(lengths(r, c), col)), 1e-12)
                    << "case " << i;
                ASSERT_GT(p(r, c), 0.0);
                ASSERT_LT(p(r, c), 1.0);
            }
        }
    });
}

TEST(Consistency, Examples) {
    const AddressHierarchy truth("Netherlands", "North Holland", "Amsterdam");
    const LevelArray ones{1, 1, 1};
    EXPECT_NEAR(consistency_reward(truth, truth, ones, kCfg), 1.0, 1e-15);
    EXPECT_NEAR(consistency_reward(AddressHierarchy("netherlands ", "Utrecht", ""), truth, ones, kCfg), 0.1, 1e-15);
    EXPECT_EQ(consistency_reward(AddressHierarchy("Belgium", "", ""), truth, ones, kCfg), 0.0);
    EXPECT_NEAR(consistency_reward(truth, truth, {0.5, 0.5, 0.5}, kCfg), 0.5, 1e-15);
}

TEST(Consistency, EmptyLevelsNeverMatch) {
    const AddressHierarchy truth("Netherlands", "", "");
    EXPECT_NEAR(consistency_reward(AddressHierarchy("Netherlands", "", ""), truth, {1, 1, 1}, kCfg), 0.1, 1e-15);
}

TEST(ConsistencyProperty, BoundedByWeightedPenalties) {
    for_all(34, 500, [](Gen& g, std::size_t) {
        static const std::vector<std::string> names{"A", "B", "c", ""};
        auto pick = [&] { return names[static_cast<std::size_t>(g.integer(0, 3))]; };
        const AddressHierarchy x(pick(), pick(), pick()), y(pick(), pick(), pick());
        const LevelArray p{g.uniform(0, 1), g.uniform(0, 1), g.uniform(0, 1)};
        const double bound = 0.1 * p[0] + 0.6 * p[1] + 0.3 * p[2];
        ASSERT_LE(consistency_reward(x, y, p, kCfg), bound + 1e-15);
    });
}

TEST(Composite, Examples) {
    EXPECT_DOUBLE_EQ(composite_reward(1, 1, 1, kCfg).total, 3.0);
    EXPECT_EQ(composite_reward(0, 0, 0, kCfg).total, 0.0);
    EXPECT_NEAR(composite_reward(0.367879, 0.7, 0.1, kCfg).total, 1.3018185, 1e-12);
    EXPECT_THROW(composite_reward(1.1, 0, 0, kCfg), std::invalid_argument);
    EXPECT_THROW(composite_reward(0, -0.1, 0, kCfg), std::invalid_argument);
    EXPECT_THROW(composite_reward(0, 0, std::nan(""), kCfg), std::invalid_argument);
}

TEST(CompositeProperty, TotalRecomputesBitForBit) {
    for_all(35, 1000, [](Gen& g, std::size_t) {
        const auto b = composite_reward(g.uniform(0, 1), g.uniform(0, 1), g.uniform(0, 1), kCfg);
        ASSERT_EQ(b.total, 1.5 * b.r_spa + 1.0 * b.r_sem + 0.5 * b.r_con);
    });
}

TEST(DirectlyJudge, Examples) {
    const AddressHierarchy truth("China", "Hefei", "Hefei Railway Station");
    EXPECT_NEAR(directly_judge_reward(truth, truth, kCfg), 1.0, 1e-15);
    EXPECT_NEAR(directly_judge_reward(AddressHierarchy("China", "Hefei City", "Hefei Railway Station"), truth, kCfg),
                0.4, 1e-15);
    EXPECT_EQ(directly_judge_reward(AddressHierarchy("Japan", "Osaka", "Umeda"), truth, kCfg), 0.0);
}

TEST(DirectlyJudge, SemanticRewardCreditsNearSynonymsThatTextEqualityMisses) {
    const NgramEmbedder e;
    const AddressHierarchy truth("China", "Hefei", "Hefei Railway Station");
    const AddressHierarchy pred("China", "Hefei City", "Hefei Railway Station");
    EXPECT_GT(semantic_reward(pred, truth, e, kCfg), directly_judge_reward(pred, truth, kCfg));
}

TEST(ReasoningLength, Units) {
    EXPECT_EQ(reasoning_length("Cafe\xCC\x81 au lait", LengthUnit::Grapheme), 12.0);
    EXPECT_EQ(reasoning_length("Cafe\xCC\x81 au lait", LengthUnit::Codepoint), 13.0);
    EXPECT_EQ(reasoning_length("Cafe\xCC\x81 au lait", LengthUnit::Word), 3.0);
}

TEST(Engine, ScoresGroupAndCountsUnresolved) {
    auto provider = std::make_shared<NgramEmbedder>();
    auto extractor = std::make_shared<PatternExtractor>();
    const LocationRecord truth{"x", GeoPoint(52.37, 4.89), AddressHierarchy("Netherlands", "North Holland", "Amsterdam"), 7, {}};
    std::vector<CandidateResponse> group(2);
    group[0].reasoning = ReasoningTrace("The yellow plates indicate the Netherlands.",
                                        "The canal houses point to North Holland.",
                                        "The tram suggests Amsterdam.");
    group[0].answer = truth.truth_address;
    group[0].resolved_point = truth.truth_point;
    group[1].reasoning = ReasoningTrace("Belgium.", "", "");
    group[1].answer = AddressHierarchy("Belgium", "", "");
    RewardEngine engine(RewardConfig{}, provider, extractor, nullptr, 2);
    const auto out = engine.score_group(group, truth);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_DOUBLE_EQ(out[0].r_spa, 1.0);
    EXPECT_NEAR(out[0].r_sem, 1.0, 1e-12);
    EXPECT_GT(out[0].r_con, 0.99);
    EXPECT_EQ(out[1].r_spa, 0.0);
    EXPECT_EQ(out[1].r_sem, 0.0);
    EXPECT_EQ(out[1].r_con, 0.0);
    EXPECT_EQ(engine.unresolved_predictions(), 1u);
    for (const auto& b : out) EXPECT_EQ(b.total, 1.5 * b.r_spa + b.r_sem + 0.5 * b.r_con);
}

TEST(Engine, JobsDoNotChangeResults) {
    auto provider = std::make_shared<NgramEmbedder>();
    auto extractor = std::make_shared<PatternExtractor>();
    const LocationRecord truth{"x", GeoPoint(0, 0), AddressHierarchy("Aldoria", "Bexmoor", "Carrow"), std::nullopt, {}};
    std::vector<CandidateResponse> group;
    Gen g(36);
    for (int i = 0; i < 8; ++i) {
        CandidateResponse c;
        c.reasoning = ReasoningTrace(std::string(static_cast<std::size_t>(g.integer(0, 80)), 'x') + " indicate Aldoria.",
                                     "point to Bexmoor.", "");
        c.answer = AddressHierarchy("Aldoria", i % 2 ? "Bexmoor" : "Dunholt", "Carrow");
        c.resolved_point = GeoPoint(g.uniform(-2, 2), g.uniform(-2, 2));
        group.push_back(c);
    }
    const auto serial = RewardEngine(RewardConfig{}, provider, extractor, nullptr, 1).score_group(group, truth);
    const auto threaded = RewardEngine(RewardConfig{}, provider, extractor, nullptr, 4).score_group(group, truth);
    for (std::size_t i = 0; i < group.size(); ++i) EXPECT_EQ(serial[i].total, threaded[i].total);
}

}  // namespace
