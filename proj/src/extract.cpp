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

#include "geoseek/extract.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <vector>

#include <json.hpp>
#include <spdlog/spdlog.h>
#include <unicode/uchar.h>

#include "geoseek/error.hpp"
#include "geoseek/text.hpp"
#include "prompt_asset.hpp"

namespace geoseek {
namespace {

using Cps = std::u32string;

constexpr std::array<std::u32string_view, 7> kKeyedForms = {
    U"country:", U"region:", U"city:", U"location:", U"answer:", U"precise:", U"place:"};

constexpr std::array<std::u32string_view, 14> kVerbForms = {
    U"this is",   U"located in", U"indicates", U"indicate",       U"suggests",
    U"suggest",   U"points to",  U"point to",  U"must be",        U"consistent with",
    U"likely",    U"is in",      U"taken in",  U"identify it as"};

// Connectors allowed inside a multi-word proper name ("Bay of Islands").
constexpr std::array<std::u32string_view, 11> kConnectors = {
    U"of", U"de", U"del", U"la", U"le", U"du", U"da", U"di", U"van", U"von", U"am"};

// Capitalized words that never start a place name on their own.
constexpr std::array<std::u32string_view, 18> kNonNames = {
    U"The", U"This",  U"These", U"That", U"Those", U"It",  U"Its",   U"There", U"A",
    U"An",  U"I",     U"We",    U"Our",  U"In",    U"On",  U"Based", U"Given", U"Overall"};

bool is_sentence_end(char32_t c) {
    return c == U'.' || c == U'!' || c == U'?' || c == U';' || c == U'\n' || c == U'\r';
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

Cps trim(const Cps& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::vector<Cps> split_sentences(const Cps& s) {
    std::vector<Cps> out;
    Cps cur;
    for (char32_t c : s) {
        if (is_sentence_end(c)) {
            Cps t = trim(cur);
            if (!t.empty()) out.push_back(std::move(t));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    Cps t = trim(cur);
    if (!t.empty()) out.push_back(std::move(t));
    return out;
}

// Rightmost whole-word, ASCII-case-insensitive occurrence of `needle`.
std::optional<std::size_t> rfind_word(const Cps& lowered, std::u32string_view needle) {
    std::size_t pos = lowered.rfind(needle);
    while (pos != Cps::npos) {
        const bool left_ok = pos == 0 || !u_isalpha(static_cast<UChar32>(lowered[pos - 1]));
        const std::size_t end = pos + needle.size();
        const bool right_ok = needle.back() == U':' || end == lowered.size() ||
                              !u_isalpha(static_cast<UChar32>(lowered[end]));
        if (left_ok && right_ok) return pos;
        if (pos == 0) break;
        pos = lowered.rfind(needle, pos - 1);
    }
    return std::nullopt;
}

bool starts_capitalized(const Cps& token) {
    for (char32_t c : token) {
        const auto u = static_cast<UChar32>(c);
        if (!u_isalpha(u)) continue;
        // Uncased scripts (CJK, Thai, ...) count as names.
        return u_isupper(u) || u_istitle(u) || (!u_islower(u) && !u_isupper(u));
    }
    return false;
}

Cps strip_punct(const Cps& token, bool* ended_phrase) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && (token[b] == U'"' || token[b] == U'\'' || token[b] == U'(' ||
                     token[b] == U'“' || token[b] == U'‘')) {
        ++b;
    }
    *ended_phrase = false;
    while (e > b && (token[e - 1] == U',' || token[e - 1] == U':' || token[e - 1] == U'"' ||
                     token[e - 1] == U'\'' || token[e - 1] == U')' || token[e - 1] == U'”' ||
                     token[e - 1] == U'’')) {
        if (token[e - 1] == U',' || token[e - 1] == U')' || token[e - 1] == U':') *ended_phrase = true;
        --e;
    }
    return token.substr(b, e - b);
}

std::vector<Cps> tokenize(const Cps& s) {
    std::vector<Cps> out;
    Cps cur;
    for (char32_t c : s) {
        if (is_space(c)) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool in_list(const Cps& word, auto const& list) {
    return std::find(list.begin(), list.end(), std::u32string_view(word)) != list.end();
}

// All maximal capitalized phrases, in order of appearance.
std::vector<Cps> capitalized_phrases(const Cps& s) {
    std::vector<Cps> phrases;
    std::vector<Cps> current;
    std::vector<Cps> pending_connectors;
    auto flush = [&] {
        while (!current.empty() && in_list(current.front(), kNonNames)) current.erase(current.begin());
        if (!current.empty()) {
            Cps joined;
            for (std::size_t i = 0; i < current.size(); ++i) {
                if (i > 0) joined.push_back(U' ');
                joined += current[i];
            }
            phrases.push_back(std::move(joined));
        }
        current.clear();
        pending_connectors.clear();
    };
    for (const Cps& raw : tokenize(s)) {
        bool ends = false;
        const Cps tok = strip_punct(raw, &ends);
        if (tok.empty()) {
            flush();
            continue;
        }
        if (starts_capitalized(tok)) {
            for (auto& c : pending_connectors) current.push_back(std::move(c));
            pending_connectors.clear();
            current.push_back(tok);
        } else if (!current.empty() && in_list(tok, kConnectors) && !ends) {
            pending_connectors.push_back(tok);
            continue;
        } else {
            flush();
        }
        if (ends) flush();
    }
    flush();
    return phrases;
}

Cps drop_article(Cps x) {
    x = trim(x);
    if (x.size() > 4 && ascii_lower(x[0]) == U't' && ascii_lower(x[1]) == U'h' &&
        ascii_lower(x[2]) == U'e' && x[3] == U' ') {
        x = trim(x.substr(4));
    }
    return x;
}

struct Match {
    std::size_t pos;
    Cps value;
};

std::optional<Match> best_match_in_sentence(const Cps& sentence) {
    Cps lowered = sentence;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);

    std::optional<Match> best;
    auto consider = [&](std::size_t pos, Cps value) {
        value = drop_article(std::move(value));
        if (value.empty()) return;
        if (!best || pos > best->pos) best = Match{pos, std::move(value)};
    };

    for (auto key : kKeyedForms) {
        if (auto pos = rfind_word(lowered, key)) {
            consider(*pos, sentence.substr(*pos + key.size()));
        }
    }
    for (auto verb : kVerbForms) {
        if (auto pos = rfind_word(lowered, verb)) {
            const auto phrases = capitalized_phrases(sentence.substr(*pos + verb.size()));
            if (!phrases.empty()) consider(*pos, phrases.front());
        }
    }
    return best;
}

}  // namespace

std::string extract_level_conclusion(std::string_view reasoning) {
    const auto sentences = split_sentences(text::to_codepoints(reasoning));
    if (sentences.empty()) return {};
    for (auto it = sentences.rbegin(); it != sentences.rend(); ++it) {
        if (auto m = best_match_in_sentence(*it)) return text::nfc_trim(text::from_codepoints(m->value));
    }
    const auto phrases = capitalized_phrases(sentences.back());
    if (phrases.empty()) return {};
    return text::nfc_trim(text::from_codepoints(drop_article(phrases.back())));
}

AddressHierarchy pattern_extract(const ReasoningTrace& reasoning) {
    return AddressHierarchy(extract_level_conclusion(reasoning.level(0)),
                            extract_level_conclusion(reasoning.level(1)),
                            extract_level_conclusion(reasoning.level(2)));
}

std::string_view extraction_prompt() { return kConclusionExtractPromptV1; }

std::optional<LlmExtractor::Options> LlmExtractor::options_from_env() {
    const char* url = std::getenv("GEOSEEK_JUDGE_URL");
    if (url == nullptr || *url == '\0') return std::nullopt;
    Options o;
    o.url = url;
    if (const char* token = std::getenv("GEOSEEK_JUDGE_TOKEN")) o.token = token;
    return o;
}

LlmExtractor::LlmExtractor(std::optional<Options> options, std::shared_ptr<HttpTransport> transport,
                           std::shared_ptr<Clock> clock)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      gate_(options_ ? options_->max_in_flight : 1) {}

std::string LlmExtractor::extractor_id() const {
    return options_ ? "llm:" + options_->model + "@" + options_->url : "llm:unconfigured";
}

std::optional<AddressHierarchy> LlmExtractor::try_parse(const std::string& body) const {
    try {
        auto j = nlohmann::json::parse(body);
        if (j.contains("choices")) {
            j = nlohmann::json::parse(
                j.at("choices").at(0).at("message").at("content").get<std::string>());
        }
        if (!j.is_object()) return std::nullopt;
        auto level = [&](const char* key) -> std::string {
            if (!j.contains(key) || j.at(key).is_null()) return {};
            return j.at(key).get<std::string>();
        };
        return AddressHierarchy(level("country"), level("region"), level("precise"));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

ExtractedConclusion LlmExtractor::extract(const ReasoningTrace& reasoning) const {
    auto fallback = [&](const std::string& why) {
        degraded_.fetch_add(1);
        spdlog::warn("conclusion judge degraded to pattern rules: {}", why);
        return ExtractedConclusion{pattern_extract(reasoning), true};
    };
    if (!options_ || !transport_) return fallback("judge endpoint not configured");

    std::string user;
    for (std::size_t i = 0; i < kLevels; ++i) {
        user += "Level " + std::to_string(i + 1) + " (" + std::string(level_name(i)) +
                ") reasoning:\n" + reasoning.level(i) + "\n\n";
    }
    const nlohmann::json payload = {
        {"model", options_->model},
        {"temperature", 0},
        {"messages",
         {{{"role", "system"}, {"content", std::string(extraction_prompt())}},
          {{"role", "user"}, {"content", user}}}}};
    HttpRequest req;
    req.method = "POST";
    req.url = options_->url;
    req.body = payload.dump();
    if (!options_->token.empty()) req.headers.emplace_back("Authorization", "Bearer " + options_->token);

    int malformed = 0;
    std::string last_error;
    for (int attempt = 0; attempt < options_->retry.max_attempts; ++attempt) {
        if (attempt > 0) clock_->sleep_for(options_->retry.delay_before_retry(attempt - 1));
        try {
            HttpResponse resp;
            {
                auto permit = gate_.acquire();
                resp = transport_->send(req);
            }
            if (resp.status != 200) {
                last_error = "HTTP " + std::to_string(resp.status);
                continue;
            }
            if (auto parsed = try_parse(resp.body)) return {*parsed, false};
            last_error = "malformed judge reply";
            if (++malformed >= 2) break;
        } catch (const TransportError& e) {
            last_error = e.what();
        }
    }
    return fallback(last_error);
}

}  // namespace geoseek
