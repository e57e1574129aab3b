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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "geoseek/cli.hpp"
#include "support/support.hpp"

namespace {

using geoseek::cli::kExitData;
using geoseek::cli::kExitDegraded;
using geoseek::cli::kExitOk;
using geoseek::cli::kExitUsage;
using testing_support::slurp;
using testing_support::TempDir;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "geoseek");
    std::ostringstream out, err;
    const int code = geoseek::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string demo(const std::string& name) { return (testing_support::data_dir() / "demo" / name).string(); }
std::string sampling(const std::string& name) { return (testing_support::data_dir() / "sampling" / name).string(); }
std::string fixtures() { return (testing_support::data_dir() / "fixtures/geocode").string(); }

TEST(Cli, HelpExitsZeroAndDocumentsEnvironment) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    for (const char* needle : {"reward", "simulate", "sample", "eval", "compare", "geocode-cache", "GEOSEEK_GEOCODE_KEY",
                               "GEOSEEK_JUDGE_URL", "GEOSEEK_EMBED_URL", "--jobs"}) {
        EXPECT_NE(r.out.find(needle), std::string::npos) << needle;
    }
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    const auto r = run({"eval", "--truth", demo("truth.jsonl")});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("--pred"), std::string::npos);
    EXPECT_EQ(run({"geocode-cache"}).code, kExitUsage);
    EXPECT_EQ(run({"geocode-cache", "stats"}).code, kExitUsage);
    EXPECT_EQ(run({"--extractor", "oracle", "eval", "--truth", demo("truth.jsonl"), "--pred", demo("pred.jsonl")}).code,
              kExitUsage);
}

TEST(Cli, EvalTableMatchesGolden) {
    const auto r = run({"eval", "--truth", demo("truth.jsonl"), "--pred", demo("pred.jsonl")});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, slurp(demo("golden/eval_table.txt")));
    EXPECT_NE(r.err.find("tau = 200 km"), std::string::npos);
}

TEST(Cli, GlobalOptionsAcceptedAfterSubcommand) {
    const auto before = run({"--json", "eval", "--truth", demo("truth.jsonl"), "--pred", demo("pred.jsonl")});
    const auto after = run({"eval", "--truth", demo("truth.jsonl"), "--pred", demo("pred.jsonl"), "--json"});
    EXPECT_EQ(after.code, kExitOk) << after.err;
    EXPECT_EQ(after.out, before.out);
}

TEST(Cli, JsonFlagSwitchesEvalAndCompareToJson) {
    const auto e = run({"--json", "eval", "--truth", demo("truth.jsonl"), "--pred", demo("pred.jsonl")});
    EXPECT_EQ(e.out, slurp(demo("golden/eval_report.json")));
    const auto c = run({"--json", "compare", "--truth", demo("truth.jsonl"), "--a", demo("pred.jsonl"), "--b",
                        demo("pred_b.jsonl")});
    EXPECT_EQ(c.code, kExitOk);
    EXPECT_EQ(c.out, slurp(demo("golden/compare.json")));
    const auto t = run({"compare", "--truth", demo("truth.jsonl"), "--a", demo("pred.jsonl"), "--b", demo("pred_b.jsonl")});
    EXPECT_EQ(t.out, slurp(demo("golden/compare_table.txt")));
}

TEST(Cli, EvalWithColdCacheAndNoKeyIsDegraded) {
    TempDir dir("cli-cold");
    std::ofstream(dir / "pred.jsonl") << R"({"id": "d001", "country": "France", "region": "Ile-de-France", "precise": "Eiffel Tower"})"
                                      << "\n";
    ::unsetenv("GEOSEEK_GEOCODE_KEY");
    const auto r = run({"--json", "eval", "--truth", demo("truth.jsonl"), "--pred", (dir / "pred.jsonl").string()});
    EXPECT_EQ(r.code, kExitDegraded);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("unresolved"), 1);
    EXPECT_EQ(j.at("records").at(0).at("band"), "Miss");
    EXPECT_EQ(j.at("records").at(0).at("geoscore"), 0.0);
}

TEST(Cli, MalformedDataExitsTwo) {
    TempDir dir("cli-bad");
    std::ofstream(dir / "truth.jsonl") << "{\"id\": \"x\", \"lat\": 91, \"lon\": 0}\n";
    EXPECT_EQ(run({"eval", "--truth", (dir / "truth.jsonl").string(), "--pred", demo("pred.jsonl")}).code, kExitData);
    std::ofstream(dir / "cfg.json") << R"({"tau": -5})";
    EXPECT_EQ(run({"--config", (dir / "cfg.json").string(), "eval", "--truth", demo("truth.jsonl"), "--pred",
                   demo("pred.jsonl")})
                  .code,
              kExitData);
}

TEST(Cli, RewardIsDeterministicAndRecomputable) {
    const auto a = run({"reward", "--candidates", demo("candidates.jsonl"), "--truth", demo("truth.jsonl")});
    const auto b = run({"--jobs", "3", "reward", "--candidates", demo("candidates.jsonl"), "--truth", demo("truth.jsonl")});
    EXPECT_EQ(a.out, b.out);
    // One candidate has no coordinates and the offline geocoder cannot resolve it.
    EXPECT_EQ(a.code, kExitDegraded);
    std::istringstream lines(a.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_DOUBLE_EQ(j.at("total").get<double>(), 1.5 * j.at("r_spa").get<double>() + j.at("r_sem").get<double>() +
                                                          0.5 * j.at("r_con").get<double>());
        ++n;
    }
    EXPECT_EQ(n, 7);
}

TEST(Cli, RewardWithFixturesResolvesEveryCandidate) {
    const auto r = run({"--fixtures", fixtures(), "reward", "--candidates", demo("candidates.jsonl"), "--truth",
                        demo("truth.jsonl")});
    EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(Cli, SimulateHonorsSeedAndIsByteIdentical) {
    const auto a = run({"--seed", "5", "simulate", "--steps", "30", "--cells", "16"});
    const auto b = run({"--seed", "5", "simulate", "--steps", "30", "--cells", "16"});
    const auto c = run({"--seed", "6", "simulate", "--steps", "30", "--cells", "16"});
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    EXPECT_EQ(a.out.rfind("step,mean_r_spa", 0), 0u);
    const auto j = run({"--json", "simulate", "--steps", "10", "--cells", "9"});
    EXPECT_EQ(nlohmann::json::parse(j.out).at("steps").size(), 10u);
    EXPECT_EQ(run({"simulate", "--cells", "1"}).code, kExitData);
}

TEST(Cli, SampleHonorsSeedAndBothAssignmentPathsAgree) {
    const auto a = run({"--seed", "9", "sample", "--stats", sampling("stats.csv"), "--grid", sampling("grid.csv"), "--total", "500"});
    const auto b = run({"--seed", "9", "--jobs", "4", "sample", "--stats", sampling("stats.csv"), "--grid",
                        sampling("grid_unlabelled.csv"), "--boundaries", sampling("boundaries.geojson"), "--total", "500"});
    EXPECT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::size_t lines = 0;
    for (char ch : a.out) lines += ch == '\n';
    EXPECT_EQ(lines, 500u);
    EXPECT_EQ(run({"sample", "--stats", sampling("stats.csv"), "--grid", sampling("grid_unlabelled.csv"), "--total", "5"}).code,
              kExitData);
}

TEST(Cli, SampleWithOutFileReportsAllocation) {
    TempDir dir("cli-sample");
    const auto r = run({"--json", "sample", "--stats", sampling("stats.csv"), "--grid", sampling("grid.csv"), "--total",
                        "1000", "--out", (dir / "draws.jsonl").string()});
    EXPECT_EQ(r.code, kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.dump(), nlohmann::json::parse(R"({"total":1000,"draws":1000,"allocation":{"CH":49,"FR":582,"IS":25,"KE":252,"NZ":92}})").dump());
}

TEST(Cli, GeocodeCacheWarmThenOffline) {
    TempDir dir("cli-warm");
    std::ofstream(dir / "addr.jsonl") << R"({"country": "", "region": "Paris", "precise": "Eiffel Tower", "lat": 48.8584, "lon": 2.2945})"
                                      << "\n";
    const std::string cache = (dir / "geo.jsonl").string();
    const auto warm = run({"--json", "--cache", cache, "--fixtures", fixtures(), "geocode-cache", "warm", "--input",
                           (dir / "addr.jsonl").string(), "--reverse"});
    ASSERT_EQ(warm.code, kExitOk) << warm.err;
    EXPECT_EQ(nlohmann::json::parse(warm.out).at("requests"), 2);
    const auto again = run({"--json", "--cache", cache, "geocode-cache", "warm", "--input", (dir / "addr.jsonl").string(),
                            "--reverse"});
    EXPECT_EQ(again.code, kExitOk) << again.err;
    const auto j = nlohmann::json::parse(again.out);
    EXPECT_EQ(j.at("requests"), 0);
    EXPECT_EQ(j.at("cache_hits"), 2);
    EXPECT_EQ(j.at("resolved"), 2);
    const auto stats = run({"--cache", cache, "geocode-cache", "stats"});
    EXPECT_EQ(stats.out, "entries   2\nforward   1\nreverse   1\n");
}

TEST(Cli, BinaryExitCodesPropagate) {
    const std::string bin = GEOSEEK_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("--help"), 0);
    EXPECT_EQ(status("bogus"), 1);
    EXPECT_EQ(status("eval --truth " + demo("truth.jsonl") + " --pred " + demo("pred.jsonl")), 0);
}

}  // namespace
