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

#include "geoseek/geo.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace geoseek {

double wrap_longitude(double lon) {
    if (lon >= -180.0 && lon <= 180.0) return lon;
    double wrapped = std::fmod(lon + 180.0, 360.0);
    if (wrapped < 0.0) wrapped += 360.0;
    return wrapped - 180.0;
}

GeoPoint::GeoPoint(double lat, double lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon)) {
        throw std::invalid_argument("GeoPoint: non-finite coordinate");
    }
    if (lat < -90.0 || lat > 90.0) {
        throw std::invalid_argument("GeoPoint: latitude " + std::to_string(lat) +
                                    " outside [-90, 90]");
    }
    lat_ = lat;
    lon_ = wrap_longitude(lon);
}

std::optional<GeoPoint> GeoPoint::try_make(double lat, double lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) {
        return std::nullopt;
    }
    return GeoPoint(lat, lon);
}

DistanceKm::DistanceKm(double km) : km_(km) {
    if (!std::isfinite(km) || km < 0.0 || km > kMaxDistanceKm) {
        throw std::invalid_argument("DistanceKm: " + std::to_string(km) +
                                    " outside [0, pi * 6371]");
    }
}

DistanceKm haversine_distance(const GeoPoint& a, const GeoPoint& b) {
    // asin(1) and pi/2 may differ in the last ulp.
    const double d = haversine_km(a.lat(), a.lon(), b.lat(), b.lon());
    return DistanceKm(std::min(d, kMaxDistanceKm));
}

double geoscore(DistanceKm d, double d_max_km) {
    if (!(d_max_km > 0.0)) {
        throw std::invalid_argument("geoscore: d_max must be positive");
    }
    return geoscore_kernel(d.value(), d_max_km);
}

GranularityBand classify_band(DistanceKm d) {
    for (std::size_t i = 0; i < kBandThresholdsKm.size(); ++i) {
        if (d.value() <= kBandThresholdsKm[i]) return kScoredBands[i];
    }
    return GranularityBand::Miss;
}

std::string_view band_name(GranularityBand band) {
    switch (band) {
        case GranularityBand::City: return "City";
        case GranularityBand::Region: return "Region";
        case GranularityBand::Country: return "Country";
        case GranularityBand::Continent: return "Continent";
        case GranularityBand::Miss: return "Miss";
    }
    return "Miss";
}

}  // namespace geoseek
