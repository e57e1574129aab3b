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

// Conclusion extraction from reasoning text.
//
// An extractor sees a ReasoningTrace and nothing else. The consistency
// reward then compares what the reasoning concludes against ground truth,
// independent of whatever final answer the reply committed to.

#ifndef GEOSEEK_EXTRACT_HPP
#define GEOSEEK_EXTRACT_HPP

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "geoseek/address.hpp"
#include "geoseek/clock.hpp"
#include "geoseek/concurrency.hpp"
#include "geoseek/http.hpp"

namespace geoseek {

struct ExtractedConclusion {
    AddressHierarchy address;
    /// Set when a remote extractor fell back to the offline rules.
    bool degraded = false;
};

class ConclusionExtractor {
public:
    virtual ~ConclusionExtractor() = default;
    virtual ExtractedConclusion extract(const ReasoningTrace& reasoning) const = 0;
    virtual std::string extractor_id() const = 0;
};

/// Rule-based extraction of one level: the last place assertion in the
/// text wins (latest sentence first, rightmost match within it). Forms:
///   1. keyed forms  "country: X", "region: X", "city: X", "location: X",
///      "answer: X", "precise: X"  (X runs to the end of the sentence)
///   2. verb forms   "this is X", "located in X", "indicate(s) X",
///      "suggest(s) X", "point(s) to X", "must be X", "consistent with X",
///      "likely X"  (X is the first capitalized phrase after the verb)
///   3. fallback     the last capitalized phrase of the final sentence
/// A leading "the" is dropped from X. Empty text yields "".
std::string extract_level_conclusion(std::string_view reasoning);

/// Applies extract_level_conclusion to each level.
AddressHierarchy pattern_extract(const ReasoningTrace& reasoning);

class PatternExtractor final : public ConclusionExtractor {
public:
    ExtractedConclusion extract(const ReasoningTrace& reasoning) const override {
        return {pattern_extract(reasoning), false};
    }
    std::string extractor_id() const override { return "pattern-v1"; }
};

/// Versioned extraction prompt shipped in assets/prompts.
std::string_view extraction_prompt();
inline constexpr std::string_view kExtractionPromptVersion = "conclusion_extract_v1";

/// Chat-completion style judge. Each call POSTs the prompt plus the three
/// reasoning levels and expects a JSON object {"country", "region",
/// "precise"}, either as the whole body or as choices[0].message.content.
/// Transport failures and non-200 replies are retried up to
/// retry.max_attempts times; a malformed reply is retried once. After that
/// the result comes from pattern_extract with degraded = true.
class LlmExtractor final : public ConclusionExtractor {
public:
    struct Options {
        std::string url;
        std::string token;
        std::string model = "judge";
        std::size_t max_in_flight = 4;
        RetryPolicy retry;
    };

    /// GEOSEEK_JUDGE_URL / GEOSEEK_JUDGE_TOKEN; nullopt when the URL is unset.
    static std::optional<Options> options_from_env();

    /// With no options (endpoint unset) every call falls back immediately.
    LlmExtractor(std::optional<Options> options, std::shared_ptr<HttpTransport> transport,
                 std::shared_ptr<Clock> clock = system_clock());

    ExtractedConclusion extract(const ReasoningTrace& reasoning) const override;
    std::string extractor_id() const override;

    std::size_t degraded_count() const { return degraded_.load(); }
    std::size_t peak_in_flight() const { return gate_.peak(); }

private:
    std::optional<AddressHierarchy> try_parse(const std::string& body) const;

    std::optional<Options> options_;
    std::shared_ptr<HttpTransport> transport_;
    std::shared_ptr<Clock> clock_;
    mutable ConcurrencyGate gate_;
    mutable std::atomic<std::size_t> degraded_{0};
};

}  // namespace geoseek

#endif  // GEOSEEK_EXTRACT_HPP
