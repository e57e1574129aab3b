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

// 50-digit reference implementations. Nothing here includes library
// headers: every formula is restated from scratch so a shared mistake
// cannot hide.

#ifndef GEOSEEK_TESTS_ORACLE_HPP
#define GEOSEEK_TESTS_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

inline big pi() { return boost::math::constants::pi<big>(); }
inline big radians(big deg) { return deg * pi() / big(180); }

inline big haversine(double lat1, double lon1, double lat2, double lon2) {
    using boost::multiprecision::asin;
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    using boost::multiprecision::sqrt;
    const big p1 = radians(big(lat1));
    const big p2 = radians(big(lat2));
    const big dp = p2 - p1;
    const big dl = radians(big(lon2)) - radians(big(lon1));
    const big a = sin(dp / 2);
    const big b = sin(dl / 2);
    big h = a * a + cos(p1) * cos(p2) * b * b;
    if (h > 1) h = 1;
    return 2 * big(6371) * asin(sqrt(h));
}

inline big geoscore(double d, double d_max = 18050.0) {
    return big(5000) * boost::multiprecision::exp(big(-10) * big(d) / big(d_max));
}

inline big spatial(double d, double tau = 200.0) {
    return boost::multiprecision::exp(-big(d) / big(tau));
}

inline big length_penalty(double len, const std::vector<double>& group, double lambda = 10.0,
                          double mu = 0.3) {
    const double lo = *std::min_element(group.begin(), group.end());
    const double hi = *std::max_element(group.begin(), group.end());
    big x;
    if (hi == lo) {
        x = len > 0 ? 1 : 0;
    } else {
        x = (big(len) - big(lo)) / (big(hi) - big(lo));
    }
    return 1 / (1 + boost::multiprecision::exp(-big(lambda) * (x - big(mu))));
}

inline std::vector<big> advantages(const std::vector<double>& rewards) {
    big mean = 0;
    for (double r : rewards) mean += r;
    mean /= rewards.size();
    big var = 0;
    for (double r : rewards) var += (big(r) - mean) * (big(r) - mean);
    var /= rewards.size();
    const big sd = boost::multiprecision::sqrt(var);
    std::vector<big> out(rewards.size(), big(0));
    if (sd <= big(1e-8)) return out;
    for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (big(rewards[i]) - mean) / sd;
    return out;
}

inline big clipped_objective(const std::vector<double>& ratios, const std::vector<double>& adv,
                             double eps = 0.2) {
    big sum = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const big r = ratios[i];
        const big a = adv[i];
        big c = r;
        if (c < 1 - big(eps)) c = 1 - big(eps);
        if (c > 1 + big(eps)) c = 1 + big(eps);
        const big x = r * a;
        const big y = c * a;
        sum += x < y ? x : y;
    }
    return sum / ratios.size();
}

struct Stat {
    std::string code;
    double road, pop, area;
};

inline std::vector<big> quotas(const std::vector<Stat>& stats, std::int64_t total,
                               double l1 = 0.5, double l2 = 0.2, double l3 = 0.3) {
    big sr = 0, sp = 0, sa = 0;
    for (const auto& s : stats) {
        sr += s.road;
        sp += s.pop;
        sa += s.area;
    }
    std::vector<big> q;
    for (const auto& s : stats) {
        q.push_back(big(total) *
                    (big(l1) * s.road / sr + big(l2) * s.pop / sp + big(l3) * s.area / sa));
    }
    return q;
}

// Hamilton apportionment: floors, then one extra unit to each of the
// largest remainders, earlier entries first on ties.
inline std::vector<std::int64_t> apportion(const std::vector<big>& q, std::int64_t total) {
    std::vector<std::int64_t> out;
    std::vector<big> rem;
    std::int64_t used = 0;
    for (const auto& x : q) {
        const big f = boost::multiprecision::floor(x);
        out.push_back(f.convert_to<std::int64_t>());
        rem.push_back(x - f);
        used += out.back();
    }
    std::vector<std::size_t> idx(q.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::int64_t k = 0; k < total - used; ++k) ++out[idx[static_cast<std::size_t>(k)]];
    return out;
}

inline std::vector<big> cell_weights(const std::vector<double>& pops) {
    std::vector<big> w;
    big sum = 0;
    for (double p : pops) {
        w.push_back(boost::multiprecision::log1p(big(p)));
        sum += w.back();
    }
    if (sum == 0) return std::vector<big>(pops.size(), big(1) / pops.size());
    for (auto& x : w) x /= sum;
    return w;
}

inline double rel_err(double got, const big& want) {
    const big diff = boost::multiprecision::abs(big(got) - want);
    if (want == 0) return diff.convert_to<double>();
    return (diff / boost::multiprecision::abs(want)).convert_to<double>();
}

// ||got - want|| / ||want||, or the absolute norm when want is zero.
template <typename Vec>
double normwise_rel_err(const Vec& got, const std::vector<big>& want) {
    big num = 0, den = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        const big d = big(static_cast<double>(got[static_cast<decltype(got.size())>(i)])) - want[i];
        num += d * d;
        den += want[i] * want[i];
    }
    if (den == 0) return boost::multiprecision::sqrt(num).convert_to<double>();
    return boost::multiprecision::sqrt(num / den).convert_to<double>();
}

}  // namespace oracle

#endif  // GEOSEEK_TESTS_ORACLE_HPP
