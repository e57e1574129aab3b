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

#include "geoseek/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "geoseek/error.hpp"
#include "geoseek/geo.hpp"

namespace geoseek {
namespace {

void check_simplex(const std::array<double, 3>& v, const char* name) {
    double sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) {
            throw std::invalid_argument(fmt::format("{} weights must be finite and >= 0", name));
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(fmt::format("{} weights must sum to 1 (got {})", name, sum));
    }
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "a1", "a2", "a3", "r", "tau", "alpha1", "alpha2", "alpha3", "delta1", "delta2",
        "delta3", "w1", "w2", "w3", "G", "t", "beta", "lambda", "mu", "length_unit",
        "epsilon", "learning_rate"};
    return keys;
}

LengthUnit parse_unit(const std::string& s) {
    if (s == "grapheme") return LengthUnit::Grapheme;
    if (s == "codepoint") return LengthUnit::Codepoint;
    if (s == "word") return LengthUnit::Word;
    throw std::invalid_argument("length_unit must be grapheme, codepoint or word");
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt::format("{}", *v) : "none";
}

}  // namespace

void RewardConfig::validate() const {
    if (!(tau_km > 0.0) || !std::isfinite(tau_km)) throw std::invalid_argument("tau must be > 0");
    check_simplex(alpha, "alpha");
    check_simplex(w, "w");
    for (double x : a) {
        if (!std::isfinite(x) || x < 0.0) {
            throw std::invalid_argument("composite weights a must be finite and >= 0");
        }
    }
    for (const auto& d : delta) {
        if (d && (!std::isfinite(*d) || *d < -1.0 || *d > 1.0)) {
            throw std::invalid_argument("delta thresholds must lie in [-1, 1]");
        }
    }
    if (!std::isfinite(lambda_pen) || !std::isfinite(mu_pen)) {
        throw std::invalid_argument("lambda and mu must be finite");
    }
}

void GrpoConfig::validate() const {
    if (group_size < 1) throw std::invalid_argument("G must be >= 1");
    if (!(temperature > 0.0)) throw std::invalid_argument("t must be > 0");
    if (!(kl_beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
}

Hyperparameters hyperparameters_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known_keys().contains(key)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    Hyperparameters h;
    auto& r = h.reward;
    auto& g = h.grpo;
    auto num = [&](const char* key, double& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    num("a1", r.a[0]);
    num("a2", r.a[1]);
    num("a3", r.a[2]);
    num("tau", r.tau_km);
    num("alpha1", r.alpha[0]);
    num("alpha2", r.alpha[1]);
    num("alpha3", r.alpha[2]);
    num("w1", r.w[0]);
    num("w2", r.w[1]);
    num("w3", r.w[2]);
    num("lambda", r.lambda_pen);
    num("mu", r.mu_pen);
    num("t", g.temperature);
    num("beta", g.kl_beta);
    num("epsilon", g.clip_eps);
    num("learning_rate", g.learning_rate);
    const char* delta_keys[3] = {"delta1", "delta2", "delta3"};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j.contains(delta_keys[i])) continue;
        const auto& v = j.at(delta_keys[i]);
        r.delta[i] = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    }
    if (j.contains("G")) {
        const auto gs = j.at("G").get<long long>();
        if (gs < 1) throw std::invalid_argument("G must be >= 1");
        g.group_size = static_cast<std::size_t>(gs);
    }
    if (j.contains("length_unit")) r.length_unit = parse_unit(j.at("length_unit").get<std::string>());
    if (j.contains("r")) {
        const double radius = j.at("r").get<double>();
        if (radius != kEarthRadiusKm) {
            throw std::invalid_argument("r is fixed at 6371 km and cannot be overridden");
        }
    }
    r.validate();
    g.validate();
    return h;
}

nlohmann::json to_json(const Hyperparameters& h) {
    const auto& r = h.reward;
    const auto& g = h.grpo;
    nlohmann::json j;
    j["a1"] = r.a[0];
    j["a2"] = r.a[1];
    j["a3"] = r.a[2];
    j["r"] = h.earth_radius_km;
    j["tau"] = r.tau_km;
    j["alpha1"] = r.alpha[0];
    j["alpha2"] = r.alpha[1];
    j["alpha3"] = r.alpha[2];
    const char* delta_keys[3] = {"delta1", "delta2", "delta3"};
    for (std::size_t i = 0; i < 3; ++i) {
        j[delta_keys[i]] = r.delta[i] ? nlohmann::json(*r.delta[i]) : nlohmann::json(nullptr);
    }
    j["w1"] = r.w[0];
    j["w2"] = r.w[1];
    j["w3"] = r.w[2];
    j["G"] = g.group_size;
    j["t"] = g.temperature;
    j["beta"] = g.kl_beta;
    j["lambda"] = r.lambda_pen;
    j["mu"] = r.mu_pen;
    j["length_unit"] = std::string(to_string(r.length_unit));
    j["epsilon"] = g.clip_eps;
    j["learning_rate"] = g.learning_rate;
    return j;
}

Hyperparameters load_hyperparameters(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    try {
        return hyperparameters_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid config file " + path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError("invalid config file " + path.string() + ": " + e.what());
    }
}

std::string describe(const Hyperparameters& h) {
    const auto& r = h.reward;
    const auto& g = h.grpo;
    std::string out;
    out += fmt::format("a = ({}, {}, {})\n", r.a[0], r.a[1], r.a[2]);
    out += fmt::format("r = {} km\n", h.earth_radius_km);
    out += fmt::format("tau = {} km\n", r.tau_km);
    out += fmt::format("alpha = ({}, {}, {})\n", r.alpha[0], r.alpha[1], r.alpha[2]);
    out += fmt::format("delta = ({}, {}, {})\n", fmt_opt(r.delta[0]), fmt_opt(r.delta[1]),
                       fmt_opt(r.delta[2]));
    out += fmt::format("w = ({}, {}, {})\n", r.w[0], r.w[1], r.w[2]);
    out += fmt::format("G = {}\nt = {}\nbeta = {}\n", g.group_size, g.temperature, g.kl_beta);
    out += fmt::format("lambda = {}\nmu = {}\nlength_unit = {}\n", r.lambda_pen, r.mu_pen,
                       to_string(r.length_unit));
    out += fmt::format("epsilon = {}\nlearning_rate = {}\n", g.clip_eps, g.learning_rate);
    return out;
}

std::string_view to_string(LengthUnit unit) {
    switch (unit) {
        case LengthUnit::Grapheme: return "grapheme";
        case LengthUnit::Codepoint: return "codepoint";
        case LengthUnit::Word: return "word";
    }
    return "grapheme";
}

}  // namespace geoseek
