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

// Unicode helpers (ICU-backed). All strings are UTF-8.

#ifndef GEOSEEK_TEXT_HPP
#define GEOSEEK_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace geoseek::text {

/// NFC normalization plus trimming of leading/trailing whitespace.
std::string nfc_trim(std::string_view s);

/// Matching key: NFC, full case fold, trim, internal whitespace runs
/// collapsed to a single ASCII space.
std::string normalize(std::string_view s);

/// normalize() applied to both sides, then byte equality.
bool equivalent(std::string_view a, std::string_view b);

/// Extended grapheme clusters.
std::size_t grapheme_count(std::string_view s);

std::size_t codepoint_count(std::string_view s);

/// Whitespace-separated tokens.
std::size_t word_count(std::string_view s);

/// Decode to code points (invalid sequences become U+FFFD).
std::u32string to_codepoints(std::string_view s);

std::string from_codepoints(std::u32string_view cps);

}  // namespace geoseek::text

#endif  // GEOSEEK_TEXT_HPP
