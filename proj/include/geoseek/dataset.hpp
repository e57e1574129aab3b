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

// Dataset records and their JSONL encodings.
//
//   truth       {"id", "lat", "lon", "country", "region", "precise",
//                "locatability"?: 0-10, "elements"?: [string]}
//   prediction  {"id", "country", "region", "precise", "lat"?, "lon"?}
//   candidates  {"id", "candidates": [{"reasoning": [c, r, p],
//                "country", "region", "precise", "lat"?, "lon"?}]}

#ifndef GEOSEEK_DATASET_HPP
#define GEOSEEK_DATASET_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoseek/address.hpp"
#include "geoseek/geo.hpp"

namespace geoseek {

struct LocationRecord {
    std::string id;
    GeoPoint truth_point;
    AddressHierarchy truth_address;
    std::optional<int> locatability;
    std::vector<std::string> elements;
};

struct PredictionRecord {
    std::string id;
    AddressHierarchy pred_address;
    std::optional<GeoPoint> pred_point;
};

struct CandidateGroup {
    std::string id;
    std::vector<CandidateResponse> candidates;
};

/// Calls fn(object, line_number) for every nonblank line. Parse failures
/// and exceptions from fn surface as DataError tagged with file:line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

LocationRecord location_from_json(const nlohmann::json& j);
PredictionRecord prediction_from_json(const nlohmann::json& j);
CandidateGroup candidates_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LocationRecord& r);
nlohmann::json to_json(const PredictionRecord& r);

/// Rejects duplicate ids.
std::vector<LocationRecord> read_truth_jsonl(const std::filesystem::path& path);
/// Duplicates are kept; evaluate() reports them.
std::vector<PredictionRecord> read_predictions_jsonl(const std::filesystem::path& path);
std::vector<CandidateGroup> read_candidates_jsonl(const std::filesystem::path& path);

}  // namespace geoseek

#endif  // GEOSEEK_DATASET_HPP
