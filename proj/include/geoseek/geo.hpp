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

// Spherical distance, GeoScore and distance-band classification.
//
// All distance math runs on a sphere of mean Earth radius 6371 km. The
// scalar kernels are templates so they compose with float/double and
// Eigen array expressions; the GeoPoint / DistanceKm wrappers carry the
// range invariants.

#ifndef GEOSEEK_GEO_HPP
#define GEOSEEK_GEO_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

namespace geoseek {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMaxDistanceKm = std::numbers::pi * kEarthRadiusKm;
inline constexpr double kDefaultGeoScoreScaleKm = 18050.0;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
    return deg * static_cast<Scalar>(std::numbers::pi / 180.0);
}

/// Wraps a longitude in degrees into [-180, 180]. Values already in range
/// are returned unchanged, so +180 stays +180.
double wrap_longitude(double lon);

class GeoPoint {
public:
    /// Throws std::invalid_argument for non-finite input or |lat| > 90.
    GeoPoint(double lat, double lon);

    double lat() const { return lat_; }
    double lon() const { return lon_; }

    /// Non-throwing variant for untrusted input.
    static std::optional<GeoPoint> try_make(double lat, double lon);

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_;
    double lon_;
};

/// Great-circle distance in kilometres.
class DistanceKm {
public:
    /// Throws std::invalid_argument outside [0, pi * 6371] or if not finite.
    explicit DistanceKm(double km);

    double value() const { return km_; }

    friend auto operator<=>(const DistanceKm&, const DistanceKm&) = default;

private:
    double km_;
};

// Haversine kernel on raw degrees. Differences are taken in degrees before
// conversion so nearby points do not lose precision to cancellation. The
// radicand is clamped to [0, 1] ahead of asin.
template <typename Scalar>
Scalar haversine_km(Scalar lat1, Scalar lon1, Scalar lat2, Scalar lon2,
                    Scalar radius = Scalar(kEarthRadiusKm)) {
    using std::asin;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar half_dlat = deg2rad(lat2 - lat1) / Scalar(2);
    const Scalar half_dlon = deg2rad(lon2 - lon1) / Scalar(2);
    const Scalar s_lat = sin(half_dlat);
    const Scalar s_lon = sin(half_dlon);
    Scalar h = s_lat * s_lat + cos(deg2rad(lat1)) * cos(deg2rad(lat2)) * s_lon * s_lon;
    if (h < Scalar(0)) h = Scalar(0);
    if (h > Scalar(1)) h = Scalar(1);
    return Scalar(2) * radius * asin(sqrt(h));
}

DistanceKm haversine_distance(const GeoPoint& a, const GeoPoint& b);

template <typename Scalar>
Scalar geoscore_kernel(Scalar d_km, Scalar d_max_km = Scalar(kDefaultGeoScoreScaleKm)) {
    using std::exp;
    return Scalar(5000) * exp(Scalar(-10) * d_km / d_max_km);
}

/// 5000 * exp(-10 d / d_max). Throws std::invalid_argument if d_max <= 0.
double geoscore(DistanceKm d, double d_max_km = kDefaultGeoScoreScaleKm);

enum class GranularityBand { City = 0, Region = 1, Country = 2, Continent = 3, Miss = 4 };

inline constexpr std::array<GranularityBand, 4> kScoredBands = {
    GranularityBand::City, GranularityBand::Region, GranularityBand::Country,
    GranularityBand::Continent};

/// Upper (inclusive) thresholds for City, Region, Country, Continent.
inline constexpr std::array<double, 4> kBandThresholdsKm = {25.0, 200.0, 750.0, 2500.0};

GranularityBand classify_band(DistanceKm d);

/// True when a distance classified as `actual` counts toward accuracy at
/// `threshold` (bands are nested: City implies Region implies ...).
constexpr bool counts_toward(GranularityBand actual, GranularityBand threshold) {
    return actual != GranularityBand::Miss && static_cast<int>(actual) <= static_cast<int>(threshold);
}

std::string_view band_name(GranularityBand band);

}  // namespace geoseek

#endif  // GEOSEEK_GEO_HPP
