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

#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "geoseek/config.hpp"
#include "geoseek/error.hpp"
#include "geoseek/geo.hpp"
#include "support/support.hpp"

namespace {

using namespace geoseek;
using nlohmann::json;

TEST(Defaults, MatchHyperparameterTable) {
    const Hyperparameters h;
    EXPECT_EQ(h.reward.tau_km, 200.0);
    EXPECT_EQ(h.reward.alpha, (std::array<double, 3>{0.1, 0.6, 0.3}));
    EXPECT_EQ(h.reward.delta[0], 0.7);
    EXPECT_EQ(h.reward.delta[1], 0.5);
    EXPECT_FALSE(h.reward.delta[2].has_value());
    EXPECT_EQ(h.reward.w, (std::array<double, 3>{0.1, 0.6, 0.3}));
    EXPECT_EQ(h.reward.a, (std::array<double, 3>{1.5, 1.0, 0.5}));
    EXPECT_EQ(h.grpo.group_size, 8u);
    EXPECT_EQ(h.grpo.temperature, 0.7);
    EXPECT_EQ(h.grpo.kl_beta, 0.001);
    EXPECT_EQ(h.earth_radius_km, 6371.0);
    EXPECT_EQ(kEarthRadiusKm, 6371.0);
    EXPECT_EQ(h.reward.lambda_pen, 10.0);
    EXPECT_EQ(h.reward.mu_pen, 0.3);
    EXPECT_EQ(h.reward.length_unit, LengthUnit::Grapheme);
}

TEST(Json, EmptyObjectKeepsDefaultsAndRoundTrips) {
    const auto h = hyperparameters_from_json(json::object());
    EXPECT_EQ(to_json(h), to_json(Hyperparameters{}));
    const auto again = hyperparameters_from_json(to_json(h));
    EXPECT_EQ(to_json(again), to_json(h));
}

TEST(Json, ShippedDefaultsFileEqualsBuiltInDefaults) {
    const auto h = load_hyperparameters(testing_support::data_dir() / "config/defaults.json");
    EXPECT_EQ(to_json(h), to_json(Hyperparameters{}));
}

TEST(Json, OverridesApply) {
    const auto h = hyperparameters_from_json(json{{"tau", 50}, {"delta3", 0.2}, {"G", 4}, {"length_unit", "word"}});
    EXPECT_EQ(h.reward.tau_km, 50.0);
    EXPECT_EQ(h.reward.delta[2], 0.2);
    EXPECT_EQ(h.grpo.group_size, 4u);
    EXPECT_EQ(h.reward.length_unit, LengthUnit::Word);
}

TEST(Json, RejectsInvalidContent) {
    EXPECT_THROW(hyperparameters_from_json(json{{"taus", 1}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json{{"tau", -1}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json{{"alpha1", 0.5}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json{{"r", 6378}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json{{"G", 0}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json{{"length_unit", "byte"}}), std::invalid_argument);
    EXPECT_THROW(hyperparameters_from_json(json::array()), std::invalid_argument);
    EXPECT_NO_THROW(hyperparameters_from_json(json{{"r", 6371}}));
}

TEST(File, UnreadableOrMalformedIsDataError) {
    testing_support::TempDir dir("cfg");
    EXPECT_THROW(load_hyperparameters(dir / "missing.json"), DataError);
    std::ofstream(dir / "bad.json") << "{tau: 1}";
    EXPECT_THROW(load_hyperparameters(dir / "bad.json"), DataError);
    std::ofstream(dir / "unknown.json") << R"({"tau": 1, "gamma": 2})";
    EXPECT_THROW(load_hyperparameters(dir / "unknown.json"), DataError);
}

TEST(Describe, ListsEveryHyperparameter) {
    const auto text = describe(Hyperparameters{});
    for (const char* needle : {"tau = 200 km", "alpha = (0.1, 0.6, 0.3)", "delta = (0.7, 0.5, none)",
                               "w = (0.1, 0.6, 0.3)", "a = (1.5, 1, 0.5)", "G = 8", "t = 0.7", "beta = 0.001",
                               "r = 6371 km"}) {
        EXPECT_NE(text.find(needle), std::string::npos) << needle;
    }
}

}  // namespace
