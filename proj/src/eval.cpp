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

#include "geoseek/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "geoseek/concurrency.hpp"
#include "geoseek/error.hpp"

namespace geoseek {
namespace {

double round_to(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double r = std::round(x * scale) / scale;
    return r == 0.0 ? 0.0 : r;  // no "-0"
}

// Fixed-order reduction over records already sorted by id.
EvalSummary summarize(const std::vector<const RecordScore*>& records) {
    EvalSummary s;
    s.n = records.size();
    if (s.n == 0) return s;
    std::array<std::size_t, 4> hits{};
    double score_sum = 0.0;
    for (const RecordScore* r : records) {
        for (std::size_t b = 0; b < kScoredBands.size(); ++b) {
            if (counts_toward(r->band, kScoredBands[b])) ++hits[b];
        }
        score_sum += r->geoscore;
    }
    for (std::size_t b = 0; b < hits.size(); ++b) {
        s.acc[b] = 100.0 * static_cast<double>(hits[b]) / static_cast<double>(s.n);
    }
    s.geoscore_mean = score_sum / static_cast<double>(s.n);
    return s;
}

nlohmann::json summary_json(const EvalSummary& s) {
    nlohmann::json acc;
    for (std::size_t b = 0; b < kScoredBands.size(); ++b) {
        acc[std::string(band_name(kScoredBands[b]))] = round_to(s.acc[b], 2);
    }
    return {{"n", s.n}, {"acc", acc}, {"geoscore_mean", round_to(s.geoscore_mean, 2)}};
}

std::string summary_row(const std::string& label, const EvalSummary& s) {
    return fmt::format("{:<14}{:>6}{:>10.2f}{:>10.2f}{:>10.2f}{:>11.2f}{:>11.2f}\n", label, s.n,
                       s.acc[0], s.acc[1], s.acc[2], s.acc[3], s.geoscore_mean);
}

}  // namespace

std::string locatability_band(int score) {
    if (score < 0 || score > 10) throw std::invalid_argument("locatability score outside 0-10");
    if (score <= 3) return "0-3";
    if (score <= 6) return "4-6";
    return "7-10";
}

EvalReport evaluate(std::span<const PredictionRecord> preds, std::span<const LocationRecord> truths,
                    GeocodeClient* resolver, const EvalOptions& options) {
    if (!(options.d_max_km > 0.0)) throw std::invalid_argument("evaluate: d_max must be positive");

    std::unordered_map<std::string, std::size_t> truth_index;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (!truth_index.emplace(truths[i].id, i).second) {
            throw DataError("duplicate truth id '" + truths[i].id + "'");
        }
    }
    std::vector<const PredictionRecord*> pred_for(truths.size(), nullptr);
    for (const auto& p : preds) {
        const auto it = truth_index.find(p.id);
        if (it == truth_index.end()) throw DataError("prediction id '" + p.id + "' has no truth record");
        if (pred_for[it->second] != nullptr) throw DataError("duplicate prediction id '" + p.id + "'");
        if (!p.pred_point && resolver == nullptr) {
            throw DataError("prediction '" + p.id + "' has no coordinates and no geocoder is configured");
        }
        pred_for[it->second] = &p;
    }

    std::vector<std::size_t> order(truths.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return truths[x].id < truths[y].id; });

    EvalReport report;
    report.records.resize(truths.size());
    parallel_for(order.size(), options.jobs, [&](std::size_t k) {
        const std::size_t ti = order[k];
        const LocationRecord& truth = truths[ti];
        RecordScore& rec = report.records[k];
        rec.id = truth.id;
        const PredictionRecord* p = pred_for[ti];
        if (p == nullptr) return;
        rec.predicted = true;
        std::optional<GeoPoint> point = p->pred_point;
        if (!point && !p->pred_address.empty()) point = resolver->forward(p->pred_address.to_query());
        if (!point) return;
        const DistanceKm d = haversine_distance(*point, truth.truth_point);
        rec.distance_km = d.value();
        rec.band = classify_band(d);
        rec.geoscore = geoscore(d, options.d_max_km);
    });

    std::vector<const RecordScore*> all;
    std::map<std::string, std::vector<const RecordScore*>> by_loc;
    std::map<std::string, std::vector<const RecordScore*>> by_elem;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const RecordScore* rec = &report.records[k];
        const LocationRecord& truth = truths[order[k]];
        all.push_back(rec);
        if (!rec->predicted) ++report.missing;
        else if (!rec->distance_km) ++report.unresolved;
        if (truth.locatability) by_loc[locatability_band(*truth.locatability)].push_back(rec);
        for (const auto& e : truth.elements) by_elem[e].push_back(rec);
    }
    report.overall = summarize(all);
    for (const auto& [k, v] : by_loc) report.by_locatability[k] = summarize(v);
    for (const auto& [k, v] : by_elem) report.by_element[k] = summarize(v);
    return report;
}

nlohmann::json to_json(const EvalReport& report, bool include_records) {
    nlohmann::json j = summary_json(report.overall);
    j["unresolved"] = report.unresolved;
    j["missing"] = report.missing;
    nlohmann::json loc = nlohmann::json::object();
    for (const auto& [k, s] : report.by_locatability) loc[k] = summary_json(s);
    nlohmann::json elem = nlohmann::json::object();
    for (const auto& [k, s] : report.by_element) elem[k] = summary_json(s);
    j["strata"] = {{"locatability", loc}, {"elements", elem}};
    if (include_records) {
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& r : report.records) {
            recs.push_back({{"id", r.id},
                            {"band", std::string(band_name(r.band))},
                            {"distance_km", r.distance_km ? nlohmann::json(round_to(*r.distance_km, 3))
                                                          : nlohmann::json(nullptr)},
                            {"geoscore", round_to(r.geoscore, 2)},
                            {"predicted", r.predicted}});
        }
        j["records"] = recs;
    }
    return j;
}

std::string render_table(const EvalReport& report) {
    std::string out;
    out += fmt::format("records       {:>6}\nunresolved    {:>6}\nmissing       {:>6}\n\n",
                       report.overall.n, report.unresolved, report.missing);
    out += fmt::format("{:<14}{:>6}{:>10}{:>10}{:>10}{:>11}{:>11}\n", "stratum", "n", "City",
                       "Region", "Country", "Continent", "GeoScore");
    out += fmt::format("{:<14}{:>6}{:>10}{:>10}{:>10}{:>11}{:>11}\n", "", "", "25km", "200km",
                       "750km", "2500km", "0-5000");
    out += summary_row("all", report.overall);
    if (!report.by_locatability.empty()) {
        out += "locatability\n";
        for (const char* key : {"0-3", "4-6", "7-10"}) {
            const auto it = report.by_locatability.find(key);
            if (it != report.by_locatability.end()) out += summary_row(std::string("  ") + key, it->second);
        }
    }
    if (!report.by_element.empty()) {
        out += "elements\n";
        for (const auto& [k, s] : report.by_element) out += summary_row("  " + k, s);
    }
    return out;
}

ReportDelta compare_reports(const EvalReport& a, const EvalReport& b) {
    if (a.records.size() != b.records.size()) {
        throw DataError("compare: reports cover different datasets");
    }
    ReportDelta d;
    d.n = a.records.size();
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (a.records[i].id != b.records[i].id) {
            throw DataError("compare: record ids differ ('" + a.records[i].id + "' vs '" +
                            b.records[i].id + "')");
        }
    }
    for (std::size_t k = 0; k < kScoredBands.size(); ++k) {
        const auto band = kScoredBands[k];
        d.metrics.push_back({fmt::format("acc_{}", band_name(band)), a.overall.acc[k], b.overall.acc[k],
                             b.overall.acc[k] - a.overall.acc[k]});
        BandChange change{band, 0, 0};
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            const bool in_a = counts_toward(a.records[i].band, band);
            const bool in_b = counts_toward(b.records[i].band, band);
            if (in_b && !in_a) ++change.gained;
            if (in_a && !in_b) ++change.lost;
        }
        d.band_changes[k] = change;
    }
    d.metrics.push_back({"geoscore_mean", a.overall.geoscore_mean, b.overall.geoscore_mean,
                         b.overall.geoscore_mean - a.overall.geoscore_mean});
    d.metrics.push_back({"unresolved", static_cast<double>(a.unresolved),
                         static_cast<double>(b.unresolved),
                         static_cast<double>(b.unresolved) - static_cast<double>(a.unresolved)});
    return d;
}

nlohmann::json to_json(const ReportDelta& delta) {
    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& m : delta.metrics) {
        metrics.push_back({{"metric", m.metric},
                           {"a", round_to(m.a, 2)},
                           {"b", round_to(m.b, 2)},
                           {"delta", round_to(m.delta, 2)}});
    }
    nlohmann::json changes = nlohmann::json::object();
    for (const auto& c : delta.band_changes) {
        changes[std::string(band_name(c.band))] = {{"gained", c.gained}, {"lost", c.lost}};
    }
    return {{"n", delta.n}, {"metrics", metrics}, {"band_changes", changes}};
}

std::string render_table(const ReportDelta& delta) {
    std::string out = fmt::format("{:<16}{:>11}{:>11}{:>11}\n", "metric", "a", "b", "delta");
    for (const auto& m : delta.metrics) {
        out += fmt::format("{:<16}{:>11.2f}{:>11.2f}{:>+11.2f}\n", m.metric, m.a, m.b,
                           round_to(m.delta, 2));
    }
    out += fmt::format("\n{:<16}{:>11}{:>11}\n", "band", "gained", "lost");
    for (const auto& c : delta.band_changes) {
        out += fmt::format("{:<16}{:>11}{:>11}\n", band_name(c.band), c.gained, c.lost);
    }
    return out;
}

}  // namespace geoseek
