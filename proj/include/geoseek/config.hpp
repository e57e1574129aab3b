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

// Reward and GRPO hyperparameters.
//
// The config file is a flat JSON object keyed by hyperparameter symbol:
//
//   {"a1": 1.5, "a2": 1.0, "a3": 0.5, "r": 6371, "tau": 200,
//    "alpha1": 0.1, "alpha2": 0.6, "alpha3": 0.3,
//    "delta1": 0.7, "delta2": 0.5, "delta3": null,
//    "w1": 0.1, "w2": 0.6, "w3": 0.3,
//    "G": 8, "t": 0.7, "beta": 0.001,
//    "lambda": 10, "mu": 0.3, "length_unit": "grapheme",
//    "epsilon": 0.2, "learning_rate": 0.1}
//
// Every key is optional; omitted keys keep their defaults. Unknown keys
// are rejected so typos do not silently fall back to defaults.

#ifndef GEOSEEK_CONFIG_HPP
#define GEOSEEK_CONFIG_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace geoseek {

enum class LengthUnit { Grapheme, Codepoint, Word };

struct RewardConfig {
    double tau_km = 200.0;
    std::array<double, 3> alpha = {0.1, 0.6, 0.3};
    /// Semantic thresholds; nullopt means the level is not thresholded.
    std::array<std::optional<double>, 3> delta = {0.7, 0.5, std::nullopt};
    std::array<double, 3> w = {0.1, 0.6, 0.3};
    std::array<double, 3> a = {1.5, 1.0, 0.5};
    double lambda_pen = 10.0;
    double mu_pen = 0.3;
    LengthUnit length_unit = LengthUnit::Grapheme;

    /// Throws std::invalid_argument when weights are negative, do not sum
    /// to one (1e-9), or tau is not positive.
    void validate() const;
};

struct GrpoConfig {
    std::size_t group_size = 8;
    double temperature = 0.7;
    double kl_beta = 0.001;
    double clip_eps = 0.2;
    double learning_rate = 0.1;

    void validate() const;
};

struct Hyperparameters {
    RewardConfig reward;
    GrpoConfig grpo;
    /// Read-only: distance math always uses kEarthRadiusKm. Present so the
    /// config mirrors the full hyperparameter table; a file may restate it
    /// but not change it.
    double earth_radius_km = 6371.0;
};

Hyperparameters hyperparameters_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Hyperparameters& h);

/// Throws DataError on unreadable files or invalid content.
Hyperparameters load_hyperparameters(const std::filesystem::path& path);

/// One "symbol = value" line per hyperparameter, for startup logging.
std::string describe(const Hyperparameters& h);

std::string_view to_string(LengthUnit unit);

}  // namespace geoseek

#endif  // GEOSEEK_CONFIG_HPP
