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

#include "geoseek/cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "geoseek/clock.hpp"
#include "geoseek/concurrency.hpp"
#include "geoseek/config.hpp"
#include "geoseek/dataset.hpp"
#include "geoseek/embed.hpp"
#include "geoseek/engine.hpp"
#include "geoseek/error.hpp"
#include "geoseek/eval.hpp"
#include "geoseek/extract.hpp"
#include "geoseek/geocode.hpp"
#include "geoseek/grpo.hpp"
#include "geoseek/sampling.hpp"

namespace geoseek::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr const char* kEnvHelp = R"(Environment:
  GEOSEEK_EMBED_URL, GEOSEEK_EMBED_TOKEN       remote embedding service
  GEOSEEK_JUDGE_URL, GEOSEEK_JUDGE_TOKEN       conclusion-extraction judge
  GEOSEEK_GEOCODE_URL, GEOSEEK_GEOCODE_KEY     OpenCage-compatible geocoder
  GEOSEEK_GEOCODE_RPS                          geocoder requests per second (default 1)

Exit codes: 0 ok, 1 usage error, 2 data error, 3 degraded external-service run.)";

struct Globals {
    std::string config;
    std::uint64_t seed = 42;
    bool json = false;
    std::size_t jobs = default_jobs();
    std::string cache;
    std::string fixtures;
    int verbosity = 0;
    std::string extractor = "auto";
    std::string embedder = "auto";
};

class Context {
public:
    Context(const Globals& g, std::ostream& err) : g_(g), err_(err) {}

    const Hyperparameters& hyperparameters() {
        if (!hp_) {
            hp_ = g_.config.empty() ? Hyperparameters{} : load_hyperparameters(g_.config);
            err_ << "effective configuration ("
                 << (g_.config.empty() ? std::string("built-in defaults") : g_.config) << "):\n"
                 << describe(*hp_);
        }
        return *hp_;
    }

    std::shared_ptr<const EmbeddingProvider> embedder() {
        auto env = RemoteEmbedder::options_from_env();
        if (g_.embedder == "remote" || (g_.embedder == "auto" && env)) {
            if (!env) throw UsageError("--embedder remote needs GEOSEEK_EMBED_URL");
            auto p = std::make_shared<RemoteEmbedder>(*env, make_http_transport());
            spdlog::info("embedder: {}", p->provider_id());
            return p;
        }
        auto p = std::make_shared<NgramEmbedder>();
        spdlog::info("embedder: {}", p->provider_id());
        return p;
    }

    std::shared_ptr<const ConclusionExtractor> extractor() {
        auto env = LlmExtractor::options_from_env();
        if (g_.extractor == "llm" || (g_.extractor == "auto" && env)) {
            llm_ = std::make_shared<LlmExtractor>(env, env ? make_http_transport() : nullptr);
            if (!env) spdlog::warn("GEOSEEK_JUDGE_URL is unset; every extraction falls back to pattern rules");
            return llm_;
        }
        return std::make_shared<PatternExtractor>();
    }

    std::shared_ptr<OpenCageClient> geocoder() {
        if (geocoder_) return geocoder_;
        auto options = OpenCageClient::options_from_env();
        std::optional<std::filesystem::path> cache_path;
        if (!g_.cache.empty()) cache_path = g_.cache;
        auto cache = std::make_shared<GeocodeCache>(cache_path);
        std::shared_ptr<HttpTransport> transport;
        std::shared_ptr<Clock> clock = system_clock();
        if (!g_.fixtures.empty()) {
            transport = std::make_shared<FixtureTransport>(g_.fixtures);
            // Replayed responses are not a live service; pace them in virtual time.
            clock = std::make_shared<VirtualClock>();
        } else if (!options.key.empty()) {
            transport = make_http_transport();
        } else {
            spdlog::info("geocoder offline: no GEOSEEK_GEOCODE_KEY and no --fixtures; cache only");
        }
        geocoder_ = std::make_shared<OpenCageClient>(options, transport, cache, clock);
        return geocoder_;
    }

    /// Logs external-service degradation and reports whether any occurred.
    bool degraded() const {
        bool any = false;
        if (llm_ && llm_->degraded_count() > 0) {
            spdlog::warn("{} extraction(s) fell back to pattern rules", llm_->degraded_count());
            any = true;
        }
        if (geocoder_) {
            const auto s = geocoder_->stats();
            if (s.degraded > 0) {
                spdlog::warn("{} geocode lookup(s) degraded (last error: {})", s.degraded,
                             to_string(geocoder_->last_error()));
                any = true;
            }
        }
        return any;
    }

private:
    const Globals& g_;
    std::ostream& err_;
    std::optional<Hyperparameters> hp_;
    std::shared_ptr<LlmExtractor> llm_;
    std::shared_ptr<OpenCageClient> geocoder_;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path);
    return f;
}

int finish(const Context& ctx) { return ctx.degraded() ? kExitDegraded : kExitOk; }

// --------------------------------------------------------------- reward

struct RewardArgs {
    std::string candidates;
    std::string truth;
};

int cmd_reward(const RewardArgs& a, const Globals& g, Context& ctx, std::ostream& out) {
    const auto& hp = ctx.hyperparameters();
    const auto truths = read_truth_jsonl(a.truth);
    std::map<std::string, const LocationRecord*> by_id;
    for (const auto& t : truths) by_id[t.id] = &t;
    const auto groups = read_candidates_jsonl(a.candidates);

    std::shared_ptr<GeocodeClient> resolver = ctx.geocoder();
    RewardEngine engine(hp.reward, ctx.embedder(), ctx.extractor(), resolver, g.jobs);
    for (const auto& group : groups) {
        const auto it = by_id.find(group.id);
        if (it == by_id.end()) throw DataError("candidate group '" + group.id + "' has no truth record");
        const auto scores = engine.score_group(group.candidates, *it->second);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const auto& s = scores[i];
            out << nlohmann::json{{"id", group.id}, {"index", i},        {"r_spa", s.r_spa},
                                  {"r_sem", s.r_sem}, {"r_con", s.r_con}, {"total", s.total}}
                       .dump()
                << '\n';
        }
    }
    if (engine.unresolved_predictions() > 0) {
        spdlog::info("{} candidate(s) had no coordinates and scored r_spa = 0", engine.unresolved_predictions());
    }
    return finish(ctx);
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
    std::size_t steps = 500;
    std::size_t cells = 64;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a, const Globals& g, Context& ctx, std::ostream& out) {
    const auto& hp = ctx.hyperparameters();
    if (a.steps < 1) throw UsageError("--steps must be >= 1");
    PlantedWorld world = make_planted_world(a.cells, hp.grpo.temperature);
    SimOptions options;
    options.seed = g.seed;
    const auto provider = ctx.embedder();
    const auto extractor = ctx.extractor();
    const TrainingTrace trace = simulate_training(world.policy, world.truth, hp, a.steps, *provider, *extractor, options);

    std::vector<double> spa, con;
    for (const auto& s : trace.steps) {
        spa.push_back(s.mean_r_spa);
        con.push_back(s.mean_r_con);
    }
    const std::size_t argmax = world.policy.argmax();
    spdlog::info("argmax cell {} (truth cell {}); r_con settles at step {}, r_spa at step {}", argmax,
                 world.truth_cell, convergence_step(con) + 1, convergence_step(spa) + 1);

    if (g.json) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& s : trace.steps) {
            steps.push_back({{"step", s.step},
                             {"mean_r_spa", s.mean_r_spa},
                             {"mean_r_sem", s.mean_r_sem},
                             {"mean_r_con", s.mean_r_con},
                             {"mean_total", s.mean_total}});
        }
        const nlohmann::json j{{"cells", a.cells},       {"seed", g.seed},   {"truth_cell", world.truth_cell},
                               {"argmax_cell", argmax}, {"steps", steps}};
        if (a.out.empty()) out << j.dump() << '\n';
        else open_out(a.out) << j.dump() << '\n';
    } else {
        if (a.out.empty()) out << trace.to_csv();
        else open_out(a.out) << trace.to_csv();
    }
    return finish(ctx);
}

// --------------------------------------------------------------- sample

struct SampleArgs {
    std::string stats;
    std::string grid;
    std::string boundaries;
    std::int64_t total = 0;
    std::string out;
};

int cmd_sample(const SampleArgs& a, const Globals& g, std::ostream& out) {
    if (a.total < 1) throw UsageError("--total must be >= 1");
    const auto stats = read_country_stats_csv(a.stats);
    const auto rows = read_grid_csv(a.grid);
    std::optional<CountryBoundaries> boundaries;
    if (!a.boundaries.empty()) boundaries = CountryBoundaries::from_file(a.boundaries);
    const auto cells = assign_cells(rows, boundaries ? &*boundaries : nullptr);
    SamplingPlan plan;
    try {
        plan = build_plan(stats, cells, a.total);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    const auto draws = draw_plan(plan, g.seed, g.jobs);

    auto write_draws = [&](std::ostream& os) {
        for (const auto& d : draws) {
            const GeoPoint c = d.cell.centroid();
            os << nlohmann::json{{"country", d.country}, {"lat_index", d.cell.lat_index},
                                 {"lon_index", d.cell.lon_index}, {"lat", c.lat()}, {"lon", c.lon()}}
                      .dump()
               << '\n';
        }
    };
    if (a.out.empty()) {
        write_draws(out);
        return kExitOk;
    }
    auto f = open_out(a.out);
    write_draws(f);
    if (g.json) {
        nlohmann::json alloc = nlohmann::json::object();
        for (const auto& [code, m] : plan.per_country) alloc[code] = m;
        out << nlohmann::json{{"total", plan.total}, {"allocation", alloc}, {"draws", draws.size()}}.dump() << '\n';
    } else {
        out << fmt::format("{:<8}{:>10}{:>8}\n", "country", "samples", "cells");
        for (const auto& [code, m] : plan.per_country) {
            const auto it = plan.cells.find(code);
            out << fmt::format("{:<8}{:>10}{:>8}\n", code, m, it == plan.cells.end() ? 0 : it->second.size());
        }
        out << fmt::format("{:<8}{:>10}\n", "total", plan.total);
    }
    return kExitOk;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
    std::string truth;
    std::string pred;
    std::string format = "table";
};

bool needs_resolver(const std::vector<PredictionRecord>& preds) {
    for (const auto& p : preds) {
        if (!p.pred_point) return true;
    }
    return false;
}

int cmd_eval(const EvalArgs& a, const Globals& g, Context& ctx, std::ostream& out) {
    const auto truths = read_truth_jsonl(a.truth);
    const auto preds = read_predictions_jsonl(a.pred);
    GeocodeClient* resolver = needs_resolver(preds) ? ctx.geocoder().get() : nullptr;
    const EvalReport report = evaluate(preds, truths, resolver, {g.jobs, kDefaultGeoScoreScaleKm});
    if (g.json || a.format == "json") out << to_json(report).dump(2) << '\n';
    else out << render_table(report);
    return finish(ctx);
}

// -------------------------------------------------------------- compare

struct CompareArgs {
    std::string truth;
    std::string a;
    std::string b;
    std::string format = "table";
};

int cmd_compare(const CompareArgs& a, const Globals& g, Context& ctx, std::ostream& out) {
    const auto truths = read_truth_jsonl(a.truth);
    const auto pa = read_predictions_jsonl(a.a);
    const auto pb = read_predictions_jsonl(a.b);
    GeocodeClient* resolver = needs_resolver(pa) || needs_resolver(pb) ? ctx.geocoder().get() : nullptr;
    const EvalOptions options{g.jobs, kDefaultGeoScoreScaleKm};
    const ReportDelta delta = compare_reports(evaluate(pa, truths, resolver, options),
                                              evaluate(pb, truths, resolver, options));
    if (g.json || a.format == "json") out << to_json(delta).dump(2) << '\n';
    else out << render_table(delta);
    return finish(ctx);
}

// -------------------------------------------------------- geocode-cache

struct WarmArgs {
    std::string input;
    bool reverse = false;
};

int cmd_warm(const WarmArgs& a, const Globals& g, Context& ctx, std::ostream& out) {
    auto client = ctx.geocoder();
    std::size_t forward = 0, reverse = 0, resolved = 0;
    for_each_jsonl(a.input, [&](const nlohmann::json& j, std::size_t) {
        const AddressHierarchy address(j.value("country", ""), j.value("region", ""), j.value("precise", ""));
        if (!address.empty()) {
            ++forward;
            if (client->forward(address.to_query())) ++resolved;
        }
        if (a.reverse && j.contains("lat") && j.contains("lon")) {
            ++reverse;
            if (client->reverse(GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>()))) ++resolved;
        }
    });
    const auto s = client->stats();
    if (g.json) {
        out << nlohmann::json{{"forward", forward},       {"reverse", reverse},
                              {"resolved", resolved},     {"requests", s.requests},
                              {"cache_hits", s.cache_hits}, {"degraded", s.degraded},
                              {"cache_entries", client->cache().size()}}
                   .dump()
            << '\n';
    } else {
        out << fmt::format("forward lookups   {}\nreverse lookups   {}\nresolved          {}\n", forward, reverse,
                           resolved);
        out << fmt::format("requests sent     {}\ncache hits        {}\ndegraded          {}\ncache entries     {}\n",
                           s.requests, s.cache_hits, s.degraded, client->cache().size());
    }
    return finish(ctx);
}

int cmd_cache_stats(const Globals& g, std::ostream& out) {
    if (g.cache.empty()) throw UsageError("geocode-cache stats needs --cache");
    if (!std::filesystem::exists(g.cache)) throw DataError("cache file " + g.cache + " does not exist");
    const GeocodeCache cache(std::filesystem::path(g.cache));
    const auto fwd = cache.count_with_prefix("fwd:");
    const auto rev = cache.count_with_prefix("rev:");
    if (g.json) {
        out << nlohmann::json{{"entries", cache.size()}, {"forward", fwd}, {"reverse", rev}}.dump() << '\n';
    } else {
        out << fmt::format("entries   {}\nforward   {}\nreverse   {}\n", cache.size(), fwd, rev);
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("geoseek", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    spdlog::set_default_logger(logger);

    CLI::App app{"Geolocation reward, training-simulation, sampling and evaluation toolkit", "geoseek"};
    app.footer(kEnvHelp);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "hyperparameter JSON file (defaults when omitted)")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--cache", g.cache, "geocode cache file (JSONL)");
    app.add_option("--fixtures", g.fixtures, "replay geocoder responses from this directory")
        ->check(CLI::ExistingDirectory);
    app.add_flag("-v,--verbose", g.verbosity, "more logging (repeatable)");
    app.add_option("--extractor", g.extractor, "conclusion extractor")
        ->check(CLI::IsMember({"auto", "pattern", "llm"}))
        ->capture_default_str();
    app.add_option("--embedder", g.embedder, "embedding provider")
        ->check(CLI::IsMember({"auto", "ngram", "remote"}))
        ->capture_default_str();

    RewardArgs reward_args;
    auto* reward = app.add_subcommand("reward", "score candidate groups; one JSON breakdown per line");
    reward->add_option("--candidates", reward_args.candidates, "candidate groups JSONL")->required()->check(CLI::ExistingFile);
    reward->add_option("--truth", reward_args.truth, "ground-truth JSONL")->required()->check(CLI::ExistingFile);

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "GRPO on a planted toy policy; CSV trace");
    simulate->add_option("--steps", sim_args.steps, "training steps")->capture_default_str();
    simulate->add_option("--cells", sim_args.cells, "grid cells (2-400)")->capture_default_str();
    simulate->add_option("--out", sim_args.out, "write the trace here instead of stdout");

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "draw a two-level geographic sampling plan");
    sample->add_option("--stats", sample_args.stats, "country stats CSV")->required()->check(CLI::ExistingFile);
    sample->add_option("--grid", sample_args.grid, "population grid CSV")->required()->check(CLI::ExistingFile);
    sample->add_option("--boundaries", sample_args.boundaries, "country boundary GeoJSON")->check(CLI::ExistingFile);
    sample->add_option("--total", sample_args.total, "total samples M")->required();
    sample->add_option("--out", sample_args.out, "draws JSONL (stdout when omitted)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "accuracy and GeoScore report");
    eval->add_option("--truth", eval_args.truth, "ground-truth JSONL")->required()->check(CLI::ExistingFile);
    eval->add_option("--pred", eval_args.pred, "predictions JSONL")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", eval_args.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();

    CompareArgs cmp_args;
    auto* compare = app.add_subcommand("compare", "metric deltas between two prediction sets");
    compare->add_option("--truth", cmp_args.truth, "ground-truth JSONL")->required()->check(CLI::ExistingFile);
    compare->add_option("--a", cmp_args.a, "baseline predictions JSONL")->required()->check(CLI::ExistingFile);
    compare->add_option("--b", cmp_args.b, "candidate predictions JSONL")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", cmp_args.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();

    auto* cache_cmd = app.add_subcommand("geocode-cache", "manage the geocode cache");
    cache_cmd->require_subcommand(1);
    WarmArgs warm_args;
    auto* warm = cache_cmd->add_subcommand("warm", "geocode every address in a JSONL file into --cache");
    warm->add_option("--input", warm_args.input, "JSONL with country/region/precise (and lat/lon)")
        ->required()
        ->check(CLI::ExistingFile);
    warm->add_flag("--reverse", warm_args.reverse, "also reverse-geocode lat/lon");
    auto* cache_stats = cache_cmd->add_subcommand("stats", "summarize the --cache file");

    std::vector<std::string> rev;
    for (std::size_t i = args.size(); i-- > 1;) rev.push_back(args[i]);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (auto* sub : app.get_subcommands()) {
            failing = sub;
            for (auto* nested : sub->get_subcommands()) failing = nested;
        }
        err << failing->help();
        return kExitUsage;
    }

    if (g.verbosity >= 2) logger->set_level(spdlog::level::debug);
    else if (g.verbosity == 1) logger->set_level(spdlog::level::info);

    Context ctx(g, err);
    try {
        ctx.hyperparameters();
        if (reward->parsed()) return cmd_reward(reward_args, g, ctx, out);
        if (simulate->parsed()) return cmd_simulate(sim_args, g, ctx, out);
        if (sample->parsed()) return cmd_sample(sample_args, g, out);
        if (eval->parsed()) return cmd_eval(eval_args, g, ctx, out);
        if (compare->parsed()) return cmd_compare(cmp_args, g, ctx, out);
        if (warm->parsed()) return cmd_warm(warm_args, g, ctx, out);
        if (cache_stats->parsed()) return cmd_cache_stats(g, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const TransportError& e) {
        err << "external service failure: " << e.what() << '\n';
        return kExitDegraded;
    } catch (const std::invalid_argument& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace geoseek::cli
