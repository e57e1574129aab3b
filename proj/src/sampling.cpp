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

#include "geoseek/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "geoseek/concurrency.hpp"
#include "geoseek/error.hpp"

namespace geoseek {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t code_hash(const std::string& code) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : code) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

// Reads a CSV whose first row is a header; returns column-name -> index
// and the data rows.
std::pair<std::map<std::string, std::size_t>, std::vector<std::vector<std::string>>> read_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::map<std::string, std::size_t> header;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (first) {
            for (std::size_t i = 0; i < fields.size(); ++i) header[fields[i]] = i;
            first = false;
            continue;
        }
        rows.push_back(std::move(fields));
    }
    return {header, rows};
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(fmt::format("{}: row {}: '{}' is not a number", path.string(), row, s));
    }
}

std::size_t column(const std::map<std::string, std::size_t>& header, const std::string& name,
                   const std::filesystem::path& path) {
    const auto it = header.find(name);
    if (it == header.end()) throw DataError(path.string() + ": missing column '" + name + "'");
    return it->second;
}

bool ring_contains(const std::vector<std::array<double, 2>>& ring, double lon, double lat) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const double xi = ring[i][0], yi = ring[i][1];
        const double xj = ring[j][0], yj = ring[j][1];
        if ((yi > lat) != (yj > lat) && lon < (xj - xi) * (lat - yi) / (yj - yi) + xi) inside = !inside;
    }
    return inside;
}

}  // namespace

GeoPoint GridCell::centroid() const {
    return GeoPoint(-90.0 + lat_index + 0.5, -180.0 + lon_index + 0.5);
}

Eigen::VectorXd allocate_real(std::span<const CountryStats> stats, std::int64_t total,
                              const std::array<double, 3>& lambdas) {
    if (stats.empty()) throw std::invalid_argument("allocate: no countries");
    if (total < 1) throw std::invalid_argument("allocate: total must be >= 1");
    double lsum = 0.0;
    for (double l : lambdas) {
        if (!(l >= 0.0)) throw std::invalid_argument("allocate: lambdas must be >= 0");
        lsum += l;
    }
    if (std::abs(lsum - 1.0) > 1e-9) throw std::invalid_argument("allocate: lambdas must sum to 1");

    const auto n = static_cast<Eigen::Index>(stats.size());
    Eigen::MatrixX3d table(n, 3);
    std::set<std::string> codes;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = stats[static_cast<std::size_t>(i)];
        if (!codes.insert(s.code).second) throw std::invalid_argument("allocate: duplicate code " + s.code);
        table.row(i) << s.road_km, s.population, s.area_km2;
    }
    if (!table.allFinite() || (table.array() < 0.0).any()) {
        throw std::invalid_argument("allocate: stats must be finite and >= 0");
    }
    const Eigen::RowVector3d sums = table.colwise().sum();
    if ((sums.array() <= 0.0).any()) {
        throw std::invalid_argument("allocate: road, population and area totals must be positive");
    }
    const Eigen::Vector3d coeffs(lambdas[0] / sums[0], lambdas[1] / sums[1], lambdas[2] / sums[2]);
    return static_cast<double>(total) * (table * coeffs);
}

std::vector<std::int64_t> largest_remainder(const Eigen::VectorXd& quotas, std::int64_t total) {
    const auto n = static_cast<std::size_t>(quotas.size());
    std::vector<std::int64_t> out(n);
    std::vector<double> frac(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = std::max(0.0, quotas[static_cast<Eigen::Index>(i)]);
        out[i] = static_cast<std::int64_t>(std::floor(q));
        frac[i] = q - std::floor(q);
        assigned += out[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    std::int64_t remaining = total - assigned;
    for (std::size_t k = 0; remaining > 0 && n > 0; k = (k + 1) % n, --remaining) ++out[order[k]];
    // Quotas summing above total by rounding: take back from the smallest remainders.
    for (std::size_t k = n; remaining < 0 && k-- > 0;) {
        if (out[order[k]] > 0) {
            --out[order[k]];
            ++remaining;
        }
    }
    return out;
}

std::map<std::string, std::int64_t> allocate_countries(std::span<const CountryStats> stats,
                                                       std::int64_t total,
                                                       const std::array<double, 3>& lambdas) {
    // Round in code order so the result does not depend on input order.
    std::vector<CountryStats> sorted(stats.begin(), stats.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    const auto counts = largest_remainder(allocate_real(sorted, total, lambdas), total);
    std::map<std::string, std::int64_t> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) out[sorted[i].code] = counts[i];
    return out;
}

Eigen::VectorXd cell_weights(std::span<const GridCell> cells) {
    if (cells.empty()) throw std::invalid_argument("cell_weights: no cells");
    Eigen::ArrayXd pop(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) pop[static_cast<Eigen::Index>(i)] = cells[i].population;
    if (!pop.allFinite() || (pop < 0.0).any()) {
        throw std::invalid_argument("cell_weights: populations must be finite and >= 0");
    }
    const Eigen::ArrayXd raw = pop.log1p();
    const double sum = raw.sum();
    if (sum <= 0.0) return Eigen::VectorXd::Constant(pop.size(), 1.0 / static_cast<double>(pop.size()));
    return (raw / sum).matrix();
}

SamplingPlan build_plan(std::span<const CountryStats> stats,
                        const std::map<std::string, std::vector<GridCell>>& cells_by_country,
                        std::int64_t total, const std::array<double, 3>& lambdas) {
    SamplingPlan plan;
    plan.total = total;
    plan.per_country = allocate_countries(stats, total, lambdas);
    for (const auto& [code, m] : plan.per_country) {
        const auto it = cells_by_country.find(code);
        if (it == cells_by_country.end() || it->second.empty()) {
            if (m > 0) throw DataError("country " + code + " is allocated samples but has no grid cells");
            continue;
        }
        plan.cells[code] = it->second;
        plan.weights[code] = cell_weights(it->second);
    }
    return plan;
}

std::size_t select_weighted(const Eigen::VectorXd& cumulative, double u) {
    const double target = u * cumulative[cumulative.size() - 1];
    const auto* begin = cumulative.data();
    const auto* end = begin + cumulative.size();
    const auto* it = std::upper_bound(begin, end, target);
    if (it == end) {
        // u * total rounded onto the last boundary: take the last cell with weight.
        it = end - 1;
        while (it != begin && *it == *(it - 1)) --it;
    }
    return static_cast<std::size_t>(it - begin);
}

std::vector<Draw> draw_plan(const SamplingPlan& plan, std::uint64_t seed, std::size_t jobs) {
    std::vector<std::string> codes;
    for (const auto& [code, m] : plan.per_country) {
        if (m > 0) codes.push_back(code);
    }
    std::vector<std::vector<Draw>> per(codes.size());
    parallel_for(codes.size(), jobs, [&](std::size_t k) {
        const std::string& code = codes[k];
        const auto& cells = plan.cells.at(code);
        Eigen::VectorXd cumulative = plan.weights.at(code);
        std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
        std::mt19937_64 gen(splitmix64(seed ^ code_hash(code)));
        const std::int64_t m = plan.per_country.at(code);
        per[k].reserve(static_cast<std::size_t>(m));
        for (std::int64_t i = 0; i < m; ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            per[k].push_back({code, cells[select_weighted(cumulative, u)]});
        }
    });
    std::vector<Draw> out;
    for (auto& v : per) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    return out;
}

std::vector<CountryStats> read_country_stats_csv(const std::filesystem::path& path) {
    const auto [header, rows] = read_csv(path);
    const auto c_code = column(header, "code", path);
    const auto c_road = column(header, "road_km", path);
    const auto c_pop = column(header, "population", path);
    const auto c_area = column(header, "area_km2", path);
    std::vector<CountryStats> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() < header.size()) throw DataError(fmt::format("{}: row {} is short", path.string(), r + 1));
        out.push_back({f[c_code], parse_number(f[c_road], path, r + 1), parse_number(f[c_pop], path, r + 1),
                       parse_number(f[c_area], path, r + 1)});
    }
    return out;
}

std::vector<GridRow> read_grid_csv(const std::filesystem::path& path) {
    const auto [header, rows] = read_csv(path);
    const auto c_lat = column(header, "lat_index", path);
    const auto c_lon = column(header, "lon_index", path);
    const auto c_pop = column(header, "population", path);
    const auto c_country = header.find("country");
    std::vector<GridRow> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() < header.size()) throw DataError(fmt::format("{}: row {} is short", path.string(), r + 1));
        GridRow row;
        const double lat = parse_number(f[c_lat], path, r + 1);
        const double lon = parse_number(f[c_lon], path, r + 1);
        if (lat < 0 || lat >= kGridLatCells || lon < 0 || lon >= kGridLonCells || lat != std::floor(lat) ||
            lon != std::floor(lon)) {
            throw DataError(fmt::format("{}: row {}: cell index out of the 360 x 180 grid", path.string(), r + 1));
        }
        row.cell = {static_cast<int>(lat), static_cast<int>(lon), parse_number(f[c_pop], path, r + 1)};
        if (row.cell.population < 0) throw DataError(fmt::format("{}: row {}: negative population", path.string(), r + 1));
        if (c_country != header.end() && !f[c_country->second].empty()) row.country = f[c_country->second];
        out.push_back(std::move(row));
    }
    return out;
}

CountryBoundaries CountryBoundaries::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

CountryBoundaries CountryBoundaries::from_json(const std::string& geojson) {
    CountryBoundaries b;
    try {
        const auto j = nlohmann::json::parse(geojson);
        auto parse_polygon = [](const nlohmann::json& rings) {
            Polygon poly;
            for (const auto& ring : rings) {
                Ring r;
                for (const auto& pt : ring) r.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
                if (r.size() < 3) throw DataError("boundary ring with fewer than 3 points");
                poly.push_back(std::move(r));
            }
            return poly;
        };
        for (const auto& f : j.at("features")) {
            const std::string code = f.at("properties").at("code").get<std::string>();
            const auto& g = f.at("geometry");
            const std::string type = g.at("type").get<std::string>();
            std::vector<Polygon> polys;
            if (type == "Polygon") {
                polys.push_back(parse_polygon(g.at("coordinates")));
            } else if (type == "MultiPolygon") {
                for (const auto& p : g.at("coordinates")) polys.push_back(parse_polygon(p));
            } else {
                throw DataError("unsupported boundary geometry " + type);
            }
            b.countries_.emplace_back(code, std::move(polys));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid boundary file: ") + e.what());
    }
    return b;
}

std::optional<std::string> CountryBoundaries::locate(const GeoPoint& p) const {
    for (const auto& [code, polys] : countries_) {
        for (const auto& poly : polys) {
            bool inside = false;
            for (const auto& ring : poly) {
                if (ring_contains(ring, p.lon(), p.lat())) inside = !inside;
            }
            if (inside) return code;
        }
    }
    return std::nullopt;
}

std::map<std::string, std::vector<GridCell>> assign_cells(std::span<const GridRow> rows,
                                                          const CountryBoundaries* boundaries) {
    std::map<std::string, std::vector<GridCell>> out;
    for (const auto& row : rows) {
        std::optional<std::string> code = row.country;
        if (!code && boundaries != nullptr) code = boundaries->locate(row.cell.centroid());
        if (!code && boundaries == nullptr) {
            throw DataError("grid row without a country column and no boundary file given");
        }
        if (code) out[*code].push_back(row.cell);
    }
    return out;
}

}  // namespace geoseek
