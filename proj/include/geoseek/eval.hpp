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

// Benchmark evaluation: per-record distance, band and GeoScore, aggregated
// into City/Region/Country/Continent accuracy and mean GeoScore, with
// strata by locatability band and by visual-element category.

#ifndef GEOSEEK_EVAL_HPP
#define GEOSEEK_EVAL_HPP

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoseek/dataset.hpp"
#include "geoseek/geo.hpp"
#include "geoseek/geocode.hpp"

namespace geoseek {

struct RecordScore {
    std::string id;
    bool predicted = false;              // a prediction row existed
    std::optional<double> distance_km;   // empty when unresolvable
    GranularityBand band = GranularityBand::Miss;
    double geoscore = 0.0;
};

struct EvalSummary {
    std::size_t n = 0;
    /// Percentages at City, Region, Country, Continent.
    std::array<double, 4> acc{};
    double geoscore_mean = 0.0;
};

struct EvalReport {
    EvalSummary overall;
    std::size_t unresolved = 0;  // predicted but no coordinates obtainable
    std::size_t missing = 0;     // truth records with no prediction row
    /// Keys "0-3", "4-6", "7-10"; only records carrying a score.
    std::map<std::string, EvalSummary> by_locatability;
    std::map<std::string, EvalSummary> by_element;
    /// Sorted by id.
    std::vector<RecordScore> records;
};

struct EvalOptions {
    std::size_t jobs = 1;
    double d_max_km = kDefaultGeoScoreScaleKm;
};

/// Every truth record is scored exactly once; a missing or unresolvable
/// prediction counts as Miss with GeoScore 0. Throws DataError for
/// prediction ids not in `truths`, duplicate prediction ids, or a
/// prediction without coordinates when no resolver is given.
EvalReport evaluate(std::span<const PredictionRecord> preds, std::span<const LocationRecord> truths,
                    GeocodeClient* resolver = nullptr, const EvalOptions& options = {});

/// "0-3", "4-6" or "7-10".
std::string locatability_band(int score);

/// Percentages and GeoScores are rounded to two decimals, record distances
/// to three, so output bytes do not depend on libm last-ulp differences.
nlohmann::json to_json(const EvalReport& report, bool include_records = true);
std::string render_table(const EvalReport& report);

struct MetricDelta {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;  // b - a
};

struct BandChange {
    GranularityBand band = GranularityBand::City;
    std::size_t gained = 0;  // within the band in b but not in a
    std::size_t lost = 0;    // within the band in a but not in b
};

struct ReportDelta {
    std::size_t n = 0;
    std::vector<MetricDelta> metrics;
    std::array<BandChange, 4> band_changes{};
};

/// Throws DataError unless both reports cover the same record ids.
ReportDelta compare_reports(const EvalReport& a, const EvalReport& b);

nlohmann::json to_json(const ReportDelta& delta);
std::string render_table(const ReportDelta& delta);

}  // namespace geoseek

#endif  // GEOSEEK_EVAL_HPP
