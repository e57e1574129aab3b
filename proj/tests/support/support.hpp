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

// Shared test helpers: seeded generators, a scriptable HTTP transport and
// paths into the source tree.

#ifndef GEOSEEK_TESTS_SUPPORT_HPP
#define GEOSEEK_TESTS_SUPPORT_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "geoseek/clock.hpp"
#include "geoseek/http.hpp"

#ifndef GEOSEEK_SOURCE_DIR
#error "GEOSEEK_SOURCE_DIR must be defined by the build"
#endif

namespace testing_support {

inline std::filesystem::path source_dir() { return GEOSEEK_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("geoseek-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Seeded value generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double lat() { return uniform(-90.0, 90.0); }
    double lon() { return uniform(-180.0, 180.0); }
    std::vector<double> reals(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Runs `body(gen, case_index)` for `cases` seeded cases. The seed of each
/// case is derived from `seed` so a failure names a reproducible case.
template <typename Body>
void for_all(std::uint64_t seed, std::size_t cases, Body&& body) {
    for (std::size_t i = 0; i < cases; ++i) {
        Gen gen(seed * 1000003ULL + i);
        body(gen, i);
    }
}

/// Transport driven by a handler, recording every request and the clock
/// reading at send time.
class MockTransport final : public geoseek::HttpTransport {
public:
    using Handler = std::function<geoseek::HttpResponse(const geoseek::HttpRequest&, std::size_t)>;

    explicit MockTransport(Handler handler, std::shared_ptr<geoseek::Clock> clock = nullptr)
        : handler_(std::move(handler)), clock_(std::move(clock)) {}

    geoseek::HttpResponse send(const geoseek::HttpRequest& request) override {
        std::size_t n;
        {
            std::lock_guard lock(mu_);
            n = requests_.size();
            requests_.push_back(request);
            if (clock_) times_.push_back(clock_->now());
        }
        return handler_(request, n);
    }

    std::size_t count() const {
        std::lock_guard lock(mu_);
        return requests_.size();
    }
    std::vector<geoseek::HttpRequest> requests() const {
        std::lock_guard lock(mu_);
        return requests_;
    }
    std::vector<std::chrono::nanoseconds> times() const {
        std::lock_guard lock(mu_);
        return times_;
    }

private:
    Handler handler_;
    std::shared_ptr<geoseek::Clock> clock_;
    mutable std::mutex mu_;
    std::vector<geoseek::HttpRequest> requests_;
    std::vector<std::chrono::nanoseconds> times_;
};

}  // namespace testing_support

#endif  // GEOSEEK_TESTS_SUPPORT_HPP
