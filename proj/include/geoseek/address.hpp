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

#ifndef GEOSEEK_ADDRESS_HPP
#define GEOSEEK_ADDRESS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "geoseek/geo.hpp"

namespace geoseek {

inline constexpr std::size_t kLevels = 3;

enum class Level : std::size_t { Country = 0, Region = 1, Precise = 2 };

std::string_view level_name(std::size_t level);

/// Country / region / precise place description. Levels are stored
/// NFC-normalized and trimmed; any level may be empty.
class AddressHierarchy {
public:
    AddressHierarchy() = default;
    AddressHierarchy(std::string_view country, std::string_view region, std::string_view precise);

    const std::string& country() const { return levels_[0]; }
    const std::string& region() const { return levels_[1]; }
    const std::string& precise() const { return levels_[2]; }
    /// 0 = country, 1 = region, 2 = precise.
    const std::string& level(std::size_t i) const { return levels_.at(i); }
    const std::string& operator[](Level l) const { return levels_[static_cast<std::size_t>(l)]; }

    bool empty() const { return levels_[0].empty() && levels_[1].empty() && levels_[2].empty(); }

    /// "precise, region, country" with empty levels skipped; used as the
    /// forward-geocoding query.
    std::string to_query() const;

    friend bool operator==(const AddressHierarchy&, const AddressHierarchy&) = default;

private:
    std::array<std::string, kLevels> levels_;
};

/// Per-level reasoning text of one reply. This is the only thing a
/// ConclusionExtractor is ever given; it has no conversion from
/// CandidateResponse or AddressHierarchy.
class ReasoningTrace {
public:
    ReasoningTrace() = default;
    ReasoningTrace(std::string country, std::string region, std::string precise)
        : levels_{std::move(country), std::move(region), std::move(precise)} {}
    explicit ReasoningTrace(std::array<std::string, kLevels> levels) : levels_(std::move(levels)) {}

    const std::string& level(std::size_t i) const { return levels_.at(i); }
    const std::array<std::string, kLevels>& levels() const { return levels_; }

    friend bool operator==(const ReasoningTrace&, const ReasoningTrace&) = default;

private:
    std::array<std::string, kLevels> levels_;
};

/// One sampled model reply.
struct CandidateResponse {
    ReasoningTrace reasoning;
    AddressHierarchy answer;
    std::optional<GeoPoint> resolved_point;
};

}  // namespace geoseek

#endif  // GEOSEEK_ADDRESS_HPP
