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

#ifndef GEOSEEK_CLOCK_HPP
#define GEOSEEK_CLOCK_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>

namespace geoseek {

/// Time source for rate limiting, backoff and cache timestamps. Swapped for
/// VirtualClock in tests so nothing sleeps for real.
class Clock {
public:
    virtual ~Clock() = default;
    /// Monotonic time since an arbitrary origin.
    virtual std::chrono::nanoseconds now() const = 0;
    virtual void sleep_for(std::chrono::nanoseconds d) = 0;
    /// Wall-clock seconds since the Unix epoch.
    virtual std::int64_t unix_seconds() const = 0;
};

class SystemClock final : public Clock {
public:
    std::chrono::nanoseconds now() const override;
    void sleep_for(std::chrono::nanoseconds d) override;
    std::int64_t unix_seconds() const override;
};

/// Deterministic clock: sleeping advances time instantly.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(std::int64_t unix_origin = 1767225600) : unix_origin_(unix_origin) {}

    std::chrono::nanoseconds now() const override { return std::chrono::nanoseconds(ns_.load()); }
    void sleep_for(std::chrono::nanoseconds d) override {
        if (d.count() > 0) ns_.fetch_add(d.count());
    }
    std::int64_t unix_seconds() const override {
        return unix_origin_ + ns_.load() / 1'000'000'000;
    }
    void advance(std::chrono::nanoseconds d) { sleep_for(d); }

private:
    std::atomic<std::int64_t> ns_{0};
    std::int64_t unix_origin_;
};

std::shared_ptr<Clock> system_clock();

}  // namespace geoseek

#endif  // GEOSEEK_CLOCK_HPP
