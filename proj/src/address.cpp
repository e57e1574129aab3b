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

#include "geoseek/address.hpp"

#include "geoseek/text.hpp"

namespace geoseek {

std::string_view level_name(std::size_t level) {
    static constexpr std::array<std::string_view, kLevels> kNames = {"country", "region", "precise"};
    return kNames.at(level);
}

AddressHierarchy::AddressHierarchy(std::string_view country, std::string_view region,
                                   std::string_view precise)
    : levels_{text::nfc_trim(country), text::nfc_trim(region), text::nfc_trim(precise)} {}

std::string AddressHierarchy::to_query() const {
    std::string q;
    for (std::size_t i = kLevels; i-- > 0;) {
        if (levels_[i].empty()) continue;
        if (!q.empty()) q += ", ";
        q += levels_[i];
    }
    return q;
}

}  // namespace geoseek
