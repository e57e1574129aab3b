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

#include "geoseek/text.hpp"

#include <memory>
#include <stdexcept>

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace geoseek::text {
namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw std::runtime_error("ICU NFC normalizer unavailable");
    }
    return *n;
}

icu::UnicodeString to_icu(std::string_view s) {
    return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
    std::string out;
    u.toUTF8String(out);
    return out;
}

icu::UnicodeString nfc_of(const icu::UnicodeString& u) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = nfc().normalize(u, status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
    return out;
}

// Splits on Unicode whitespace and rejoins with single spaces.
icu::UnicodeString collapse_ws(const icu::UnicodeString& u) {
    icu::UnicodeString out;
    bool pending_space = false;
    for (int32_t i = 0; i < u.length();) {
        const UChar32 c = u.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = !out.isEmpty();
            continue;
        }
        if (pending_space) out.append(static_cast<UChar>(u' '));
        pending_space = false;
        out.append(c);
    }
    return out;
}

icu::UnicodeString trim_ws(const icu::UnicodeString& u) {
    int32_t begin = 0;
    int32_t end = u.length();
    while (begin < end && u_isUWhiteSpace(u.char32At(begin))) begin += U16_LENGTH(u.char32At(begin));
    while (end > begin) {
        const int32_t prev = u.moveIndex32(end, -1);
        if (!u_isUWhiteSpace(u.char32At(prev))) break;
        end = prev;
    }
    return icu::UnicodeString(u, begin, end - begin);
}

}  // namespace

std::string nfc_trim(std::string_view s) {
    return to_utf8(trim_ws(nfc_of(to_icu(s))));
}

std::string normalize(std::string_view s) {
    icu::UnicodeString u = nfc_of(to_icu(s));
    u.foldCase(U_FOLD_CASE_DEFAULT);
    // Case folding can produce denormalized sequences.
    return to_utf8(collapse_ws(nfc_of(u)));
}

bool equivalent(std::string_view a, std::string_view b) {
    return normalize(a) == normalize(b);
}

std::size_t grapheme_count(std::string_view s) {
    if (s.empty()) return 0;
    const icu::UnicodeString u = to_icu(s);
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) throw std::runtime_error("ICU break iterator unavailable");
    it->setText(u);
    std::size_t n = 0;
    it->first();
    while (it->next() != icu::BreakIterator::DONE) ++n;
    return n;
}

std::size_t codepoint_count(std::string_view s) {
    return static_cast<std::size_t>(to_icu(s).countChar32());
}

std::size_t word_count(std::string_view s) {
    const icu::UnicodeString u = to_icu(s);
    std::size_t n = 0;
    bool in_word = false;
    for (int32_t i = 0; i < u.length();) {
        const UChar32 c = u.char32At(i);
        i += U16_LENGTH(c);
        const bool ws = u_isUWhiteSpace(c);
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

std::u32string to_codepoints(std::string_view s) {
    const icu::UnicodeString u = to_icu(s);
    std::u32string out;
    out.reserve(static_cast<std::size_t>(u.length()));
    for (int32_t i = 0; i < u.length();) {
        const UChar32 c = u.char32At(i);
        i += U16_LENGTH(c);
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

std::string from_codepoints(std::u32string_view cps) {
    icu::UnicodeString u;
    for (char32_t c : cps) u.append(static_cast<UChar32>(c));
    return to_utf8(u);
}

}  // namespace geoseek::text
