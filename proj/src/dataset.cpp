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

#include "geoseek/dataset.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "geoseek/error.hpp"

namespace geoseek {
namespace {

std::string opt_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return {};
    return j.at(key).get<std::string>();
}

std::optional<GeoPoint> opt_point(const nlohmann::json& j) {
    const bool has_lat = j.contains("lat") && !j.at("lat").is_null();
    const bool has_lon = j.contains("lon") && !j.at("lon").is_null();
    if (has_lat != has_lon) throw DataError("lat and lon must be given together");
    if (!has_lat) return std::nullopt;
    return GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>());
}

AddressHierarchy address_of(const nlohmann::json& j) {
    return AddressHierarchy(opt_string(j, "country"), opt_string(j, "region"),
                            opt_string(j, "precise"));
}

std::string required_id(const nlohmann::json& j) {
    if (!j.contains("id")) throw DataError("record without id");
    const auto& v = j.at("id");
    std::string id = v.is_string() ? v.get<std::string>() : v.dump();
    if (id.empty()) throw DataError("record with empty id");
    return id;
}

}  // namespace

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            fn(nlohmann::json::parse(line), lineno);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        } catch (const std::invalid_argument& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        }
    }
}

LocationRecord location_from_json(const nlohmann::json& j) {
    LocationRecord r{required_id(j), GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>()),
                     address_of(j), std::nullopt, {}};
    if (j.contains("locatability") && !j.at("locatability").is_null()) {
        const int score = j.at("locatability").get<int>();
        if (score < 0 || score > 10) throw DataError("locatability must be within 0-10");
        r.locatability = score;
    }
    if (j.contains("elements") && !j.at("elements").is_null()) {
        std::set<std::string> unique;
        for (const auto& e : j.at("elements")) unique.insert(e.get<std::string>());
        r.elements.assign(unique.begin(), unique.end());
    }
    return r;
}

PredictionRecord prediction_from_json(const nlohmann::json& j) {
    return PredictionRecord{required_id(j), address_of(j), opt_point(j)};
}

CandidateGroup candidates_from_json(const nlohmann::json& j) {
    CandidateGroup g{required_id(j), {}};
    for (const auto& c : j.at("candidates")) {
        CandidateResponse resp;
        std::array<std::string, kLevels> reasoning;
        if (c.contains("reasoning")) {
            const auto& levels = c.at("reasoning");
            if (!levels.is_array() || levels.size() != kLevels) {
                throw DataError("reasoning must be an array of exactly 3 strings");
            }
            for (std::size_t i = 0; i < kLevels; ++i) reasoning[i] = levels.at(i).get<std::string>();
        }
        resp.reasoning = ReasoningTrace(std::move(reasoning));
        resp.answer = address_of(c);
        resp.resolved_point = opt_point(c);
        g.candidates.push_back(std::move(resp));
    }
    if (g.candidates.empty()) throw DataError("candidate group '" + g.id + "' is empty");
    return g;
}

nlohmann::json to_json(const LocationRecord& r) {
    nlohmann::json j = {{"id", r.id},
                        {"lat", r.truth_point.lat()},
                        {"lon", r.truth_point.lon()},
                        {"country", r.truth_address.country()},
                        {"region", r.truth_address.region()},
                        {"precise", r.truth_address.precise()}};
    if (r.locatability) j["locatability"] = *r.locatability;
    if (!r.elements.empty()) j["elements"] = r.elements;
    return j;
}

nlohmann::json to_json(const PredictionRecord& r) {
    nlohmann::json j = {{"id", r.id},
                        {"country", r.pred_address.country()},
                        {"region", r.pred_address.region()},
                        {"precise", r.pred_address.precise()}};
    if (r.pred_point) {
        j["lat"] = r.pred_point->lat();
        j["lon"] = r.pred_point->lon();
    }
    return j;
}

std::vector<LocationRecord> read_truth_jsonl(const std::filesystem::path& path) {
    std::vector<LocationRecord> out;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) {
        auto r = location_from_json(j);
        if (!seen.insert(r.id).second) throw DataError("duplicate truth id '" + r.id + "'");
        out.push_back(std::move(r));
    });
    return out;
}

std::vector<PredictionRecord> read_predictions_jsonl(const std::filesystem::path& path) {
    std::vector<PredictionRecord> out;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) {
        out.push_back(prediction_from_json(j));
    });
    return out;
}

std::vector<CandidateGroup> read_candidates_jsonl(const std::filesystem::path& path) {
    std::vector<CandidateGroup> out;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) {
        out.push_back(candidates_from_json(j));
    });
    return out;
}

}  // namespace geoseek
