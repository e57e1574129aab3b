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

#ifndef GEOSEEK_STATS_HPP
#define GEOSEEK_STATS_HPP

#include <span>

#include <Eigen/Dense>

namespace geoseek {

/// 1-based ranks, ties get the average of the ranks they span.
Eigen::VectorXd average_ranks(std::span<const double> values);

/// Pearson correlation; 0 when either side is constant.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace geoseek

#endif  // GEOSEEK_STATS_HPP
