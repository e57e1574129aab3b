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

// Two-level geographic sampling.
//
// Countries receive
//   m_i = M (l1 R_i / sum R + l2 P_i / sum P + l3 A_i / sum A)
// samples (R road length, P population, A land area), rounded to integers
// by the largest-remainder method. Inside a country, 1 x 1 degree grid
// cells are drawn with probability proportional to log(1 + population).

#ifndef GEOSEEK_SAMPLING_HPP
#define GEOSEEK_SAMPLING_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geoseek/geo.hpp"

namespace geoseek {

struct CountryStats {
    std::string code;  // ISO 3166-1 alpha-2
    double road_km = 0.0;
    double population = 0.0;
    double area_km2 = 0.0;
};

inline constexpr int kGridLatCells = 180;
inline constexpr int kGridLonCells = 360;

/// One cell of the global 360 x 180 grid. lat_index 0 spans [-90, -89),
/// lon_index 0 spans [-180, -179).
struct GridCell {
    int lat_index = 0;
    int lon_index = 0;
    double population = 0.0;

    GeoPoint centroid() const;
    friend bool operator==(const GridCell&, const GridCell&) = default;
};

inline constexpr std::array<double, 3> kDefaultAllocationLambdas = {0.5, 0.2, 0.3};

/// Real-valued per-country allocation (same order as `stats`). Throws
/// std::invalid_argument for empty input, duplicate codes, negative or
/// non-finite stats, any all-zero stat column, lambdas not summing to 1.
Eigen::VectorXd allocate_real(std::span<const CountryStats> stats, std::int64_t total,
                              const std::array<double, 3>& lambdas = kDefaultAllocationLambdas);

/// Largest-remainder rounding of nonnegative quotas summing to `total`.
/// Ties in the fractional part go to the lower index.
std::vector<std::int64_t> largest_remainder(const Eigen::VectorXd& quotas, std::int64_t total);

/// Integer allocation keyed by country code; sums to `total` exactly.
std::map<std::string, std::int64_t> allocate_countries(
    std::span<const CountryStats> stats, std::int64_t total,
    const std::array<double, 3>& lambdas = kDefaultAllocationLambdas);

/// log(1 + P_c) / sum log(1 + P_c); uniform when every cell is empty.
/// Throws std::invalid_argument for no cells or negative population.
Eigen::VectorXd cell_weights(std::span<const GridCell> cells);

struct SamplingPlan {
    std::int64_t total = 0;
    std::map<std::string, std::int64_t> per_country;
    std::map<std::string, std::vector<GridCell>> cells;
    std::map<std::string, Eigen::VectorXd> weights;
};

/// Throws DataError when a country with a positive allocation has no cells.
SamplingPlan build_plan(std::span<const CountryStats> stats,
                        const std::map<std::string, std::vector<GridCell>>& cells_by_country,
                        std::int64_t total,
                        const std::array<double, 3>& lambdas = kDefaultAllocationLambdas);

struct Draw {
    std::string country;
    GridCell cell;
};

/// Draws m_i cells with replacement per country. Each country uses its own
/// mt19937_64 stream seeded from (seed, country code), so results do not
/// depend on `jobs`. Output is ordered by country code, then draw order.
std::vector<Draw> draw_plan(const SamplingPlan& plan, std::uint64_t seed, std::size_t jobs = 1);

/// Index of the cell selected by u in [0, 1) under `weights`. Zero-weight
/// cells are never selected.
std::size_t select_weighted(const Eigen::VectorXd& cumulative, double u);

// ------------------------------------------------------------------ io

/// CSV with header: code,road_km,population,area_km2
std::vector<CountryStats> read_country_stats_csv(const std::filesystem::path& path);

struct GridRow {
    GridCell cell;
    std::optional<std::string> country;
};

/// CSV with header: lat_index,lon_index,population[,country]
std::vector<GridRow> read_grid_csv(const std::filesystem::path& path);

/// Country polygons from a GeoJSON FeatureCollection. Each feature has
/// properties.code and a Polygon or MultiPolygon geometry with [lon, lat]
/// rings (even-odd rule, holes allowed, no antimeridian crossing).
class CountryBoundaries {
public:
    static CountryBoundaries from_file(const std::filesystem::path& path);
    static CountryBoundaries from_json(const std::string& geojson);

    /// Code of the first country whose polygon contains the point.
    std::optional<std::string> locate(const GeoPoint& p) const;

private:
    using Ring = std::vector<std::array<double, 2>>;
    using Polygon = std::vector<Ring>;
    std::vector<std::pair<std::string, std::vector<Polygon>>> countries_;
};

/// Groups cells by their explicit country column, or by the boundary
/// containing the cell centroid when the column is absent. Cells matching
/// no country are dropped.
std::map<std::string, std::vector<GridCell>> assign_cells(std::span<const GridRow> rows,
                                                          const CountryBoundaries* boundaries);

}  // namespace geoseek

#endif  // GEOSEEK_SAMPLING_HPP
